#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "annealsim/bath.hpp"
#include "annealsim/model.hpp"
#include "annealsim/ode.hpp"
#include "annealsim/schedule.hpp"

namespace annealsim {

struct PtreConfig {
  HybridSpectrum bath;
  int table_nodes = 4001;
  OdeOptions ode{1e-8, 1e-12};
};

struct PtreResult {
  double p_up = 0.0;
  double p_down = 0.0;
  Eigen::VectorXd populations;
  OdeStats stats;
};

// Classical Pauli master equation over the computational basis: polaron-frame
// hopping between Hamming-distance-1 states at rates set by the hybrid
// kernel evaluated at the classical energy difference, with the transverse
// field entering only through the A(s)^2/4 prefactor.
class PtreEngine {
 public:
  PtreEngine(const ProblemSpec& spec, const Schedule& sched,
             PtreConfig cfg = {});

  PtreResult run(BasisState z0, const AnnealProtocol& proto) const;

  // generator at a fixed anneal point: dp/dt = T p; columns sum to zero,
  // (n+1) * 2^n structural entries
  Eigen::SparseMatrix<double> transfer_matrix(double s) const;

  const GammaPTable& rates() const { return table_; }
  double bohr_frequency(BasisState z, double s) const;

 private:
  void fill_rates(double s, Eigen::VectorXd& gain) const;

  ProblemSpec spec_;
  PtreConfig cfg_;
  const Schedule* sched_;
  Eigen::VectorXd target_;
  GammaPTable table_;
};

// stationary distribution of a fixed-s generator (kernel vector, normalized
// to unit sum)
Eigen::VectorXd stationary_distribution(const Eigen::SparseMatrix<double>& t);

// Boltzmann weights over the classical level energies at anneal point s
Eigen::VectorXd gibbs_distribution(const ProblemSpec& spec,
                                   const Schedule& sched, double s,
                                   double beta);

}  // namespace annealsim
