#pragma once

#include <Eigen/Dense>

#include "annealsim/frames.hpp"
#include "annealsim/model.hpp"
#include "annealsim/ode.hpp"
#include "annealsim/schedule.hpp"
#include "annealsim/spin_basis.hpp"

namespace annealsim {

struct ClosedConfig {
  // keep only the total-spin sector containing the two ferromagnetic states;
  // exact for p_up / p_down because the sectors are dynamically decoupled
  bool max_sector_only = false;
  int table_nodes = 2001;
  OdeOptions ode{1e-9, 1e-12};
};

struct ClosedResult {
  double p_up = 0.0;
  double p_down = 0.0;
  Eigen::VectorXcd amplitudes;  // kept-level frame amplitudes at the final edge
  OdeStats stats;
};

// Unitary propagation of the kept-level amplitudes in the co-rotating
// eigenframe with exact phase bookkeeping: the state carries slowly varying
// envelopes, diagonal phases are integrated analytically from the energy
// table, and only the frame-rotation coupling drives transitions.
class ClosedEngine {
 public:
  ClosedEngine(const ProblemSpec& spec, const Schedule& sched,
               ClosedConfig cfg = {});

  // amplitudes of a computational basis state in the frame at the protocol's
  // starting edge (norm < 1 when the kept set does not span the state)
  Eigen::VectorXcd initial_amplitudes(BasisState z,
                                      const AnnealProtocol& proto) const;

  ClosedResult propagate(const AnnealProtocol& proto,
                         Eigen::VectorXcd c) const;

  ClosedResult run(BasisState z0, const AnnealProtocol& proto) const;

  // |<z|psi>|^2 for the frame amplitudes c at anneal parameter s (an edge)
  double overlap_probability(BasisState z, const Eigen::VectorXcd& c,
                             double s) const;

  // full lab state reconstructed from frame amplitudes (small n only)
  Eigen::VectorXcd lab_state(const Eigen::VectorXcd& c, double s) const;

  const FrameTable& table() const { return table_; }
  const SpinBasis& basis() const { return basis_; }
  int n_kept() const { return table_.n_kept(); }

 private:
  Eigen::VectorXd basis_row(BasisState z, double s) const;
  void integrate_branch(double s_from, double s_to, double tau,
                        Eigen::VectorXcd& c, OdeStats& stats) const;

  ProblemSpec spec_;
  ClosedConfig cfg_;
  SpinBasis basis_;
  FrameGeometry geom_;
  FrameTable table_;
};

// direct dense lab-frame integration of the Schroedinger equation; the
// oracle the rotated propagation is validated against
Eigen::VectorXcd propagate_dense(const ProblemSpec& spec, const Schedule& sched,
                                 const AnnealProtocol& proto, BasisState z0,
                                 const OdeOptions& opt = {1e-10, 1e-13});

}  // namespace annealsim
