#pragma once

#include <Eigen/Dense>

#include "annealsim/bath.hpp"
#include "annealsim/frames.hpp"
#include "annealsim/model.hpp"
#include "annealsim/ode.hpp"
#include "annealsim/schedule.hpp"
#include "annealsim/spin_basis.hpp"

namespace annealsim {

enum class BathCoupling { independent, collective };

struct AmeConfig {
  OhmicBath bath;
  BathCoupling coupling = BathCoupling::independent;
  // frequency-matching tolerance (rad/ns): dissipator cross terms couple
  // transition pairs only when their Bohr frequencies agree within this
  // tolerance, so symmetry-protected degeneracies interfere while split
  // levels decouple (rotating-wave limit of the weak-coupling generator)
  double secular_window = 1e-7;
  bool lamb_shift = false;
  int n_levels = 0;  // keep the n lowest levels of the s=1 frame; 0 = all
  int table_nodes = 2001;
  OdeOptions ode{1e-8, 1e-11};
};

struct AmeResult {
  double p_up = 0.0;
  double p_down = 0.0;
  double trace = 0.0;
  Eigen::MatrixXcd rho;  // kept-level density matrix at the final edge
  OdeStats stats;
};

// Weak-coupling master equation in the instantaneous eigenframe with exact
// diagonal-phase bookkeeping. The state carries slowly varying envelopes;
// each right-hand-side evaluation unwinds the phases, applies the real
// structural generator (frame-rotation commutator plus the filtered secular
// dissipator, built trace-exact), and rewinds them.
class AmeEngine {
 public:
  AmeEngine(const ProblemSpec& spec, const Schedule& sched, AmeConfig cfg = {});

  AmeResult run(BasisState z0, const AnnealProtocol& proto) const;

  // <z| rho |z> for a kept-level density matrix at an anneal edge
  double population(BasisState z, const Eigen::MatrixXcd& rho, double s) const;

  int n_kept() const { return table_.n_kept(); }
  const FrameTable& table() const { return table_; }
  const SpinBasis& basis() const { return basis_; }

 private:
  Eigen::VectorXd basis_row(BasisState z, double s) const;
  void apply_generator(double sdot, const Eigen::VectorXd& energies,
                       const Eigen::MatrixXd& coupling,
                       const std::vector<Eigen::MatrixXd>& ops,
                       const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;
  void integrate_branch(double s_from, double s_to, double tau, double t_hold,
                        Eigen::MatrixXcd& rho, OdeStats& stats) const;

  ProblemSpec spec_;
  AmeConfig cfg_;
  SpinBasis basis_;
  FrameGeometry geom_;
  Eigen::MatrixXd collective_op_;
  FrameTable table_;
  std::vector<double> lamb_grid_;  // cached frequency shift on a uniform grid
  double lamb_omega_max_ = 0.0;
  double lamb_step_ = 0.0;

  double lamb_at(double omega) const;
};

}  // namespace annealsim
