#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <vector>

#include "annealsim/errors.hpp"
#include "annealsim/schedule.hpp"

// Fully-connected p-spin model. The time-dependent Hamiltonian is
//   H(s) = (A(s)/2) * Hd + (B(s)/2) * Ht
// with driver Hd = -sum_i sigma_i^x and target Ht = -N ((1/N) sum_i sigma_i^z)^p.
// Bit convention: bit i = 1 means spin i down; the all-up state is index 0
// and the all-down state is index 2^N - 1.

namespace annealsim {

struct ProblemSpec {
  int n_qubits = 4;
  int p = 2;
};

using BasisState = std::uint64_t;

inline BasisState all_up_state(int) { return 0; }
inline BasisState all_down_state(int n) {
  return (n >= 64) ? ~0ull : ((1ull << n) - 1);
}

// exact binomial coefficient in integer arithmetic
std::uint64_t binomial(int n, int k);

// dimensionless target energies: entry z = -N * m(z)^p. The physical target
// contribution to H(s) is (B(s)/2) times this.
Eigen::VectorXd target_diagonal(const ProblemSpec& spec);

// sparse -sum_i sigma_i^x; physical contribution is (A(s)/2) times this.
Eigen::SparseMatrix<double> driver_matrix(const ProblemSpec& spec);

// normalized magnetization m = (N - 2 popcount) / N
double magnetization(BasisState z, int n);

// squared overlap of a computational basis state with the maximum-spin
// state of the same magnetization: 1 / C(N, k) for k down spins. Upper
// bound for total success under spin-conserving dynamics.
double max_spin_overlap(BasisState z, int n);

// semiclassical planar-rotor energy surface shared with the Monte Carlo
// dynamics: -(A/2) sum_i sin(theta_i) - (B N / 2) ((1/N) sum_i cos(theta_i))^p
struct AngleConfig {
  std::vector<double> thetas;
};

double semiclassical_energy(const AngleConfig& cfg, const Schedule& sched,
                            double s, int p);

// O(1) energy difference for a single-angle update given cached sums; the
// caller maintains sum_sin = sum sin(theta_i) and sum_cos = sum cos(theta_i).
double delta_E_single_spin(double theta_old, double theta_new, double sum_sin,
                           double sum_cos, int n, double a, double b, int p);

}  // namespace annealsim
