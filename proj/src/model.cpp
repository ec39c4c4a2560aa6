#include "annealsim/model.hpp"

#include <bit>
#include <cmath>

namespace annealsim {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

Eigen::VectorXd target_diagonal(const ProblemSpec& spec) {
  const int n = spec.n_qubits;
  if (n < 1) throw DomainError("need at least one qubit");
  if (n > 26) throw CapacityError("target diagonal limited to N <= 26");
  const std::uint64_t dim = 1ull << n;
  Eigen::VectorXd diag(static_cast<Eigen::Index>(dim));
  for (std::uint64_t z = 0; z < dim; ++z) {
    const double m = magnetization(z, n);
    diag[static_cast<Eigen::Index>(z)] = -n * std::pow(m, spec.p);
  }
  return diag;
}

Eigen::SparseMatrix<double> driver_matrix(const ProblemSpec& spec) {
  const int n = spec.n_qubits;
  if (n < 1) throw DomainError("need at least one qubit");
  if (n > 14) throw CapacityError("dense driver limited to N <= 14");
  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::SparseMatrix<double> hd(dim, dim);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(dim) * n);
  for (Eigen::Index z = 0; z < dim; ++z)
    for (int i = 0; i < n; ++i)
      trip.emplace_back(z ^ (Eigen::Index(1) << i), z, -1.0);
  hd.setFromTriplets(trip.begin(), trip.end());
  return hd;
}

double magnetization(BasisState z, int n) {
  const int down = std::popcount(z);
  return static_cast<double>(n - 2 * down) / n;
}

double max_spin_overlap(BasisState z, int n) {
  const int k = std::popcount(z);
  return 1.0 / static_cast<double>(binomial(n, k));
}

double semiclassical_energy(const AngleConfig& cfg, const Schedule& sched,
                            double s, int p) {
  const auto [a, b] = sched.eval(s);
  const int n = static_cast<int>(cfg.thetas.size());
  double sum_sin = 0.0, sum_cos = 0.0;
  for (double th : cfg.thetas) {
    sum_sin += std::sin(th);
    sum_cos += std::cos(th);
  }
  return -0.5 * a * sum_sin - 0.5 * b * n * std::pow(sum_cos / n, p);
}

double delta_E_single_spin(double theta_old, double theta_new,
                           double /*sum_sin*/, double sum_cos, int n, double a,
                           double b, int p) {
  // the driver term is linear in sin(theta_i), so only the change matters
  const double ds = std::sin(theta_new) - std::sin(theta_old);
  const double dc = std::cos(theta_new) - std::cos(theta_old);
  const double m_old = sum_cos / n;
  const double m_new = (sum_cos + dc) / n;
  return -0.5 * a * ds - 0.5 * b * n * (std::pow(m_new, p) - std::pow(m_old, p));
}

}  // namespace annealsim
