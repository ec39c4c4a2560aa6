#include "annealsim/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "annealsim/spin_basis.hpp"

namespace annealsim {

namespace {

void gauge_fix(Eigen::MatrixXd& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index imax = 0;
    double amax = -1.0;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      const double a = std::abs(v(r, c));
      if (a > amax + 1e-15) {
        amax = a;
        imax = r;
      }
    }
    if (v(imax, c) < 0.0) v.col(c) = -v.col(c);
  }
}

}  // namespace

EigenFrame dense_eigensystem(const ProblemSpec& spec, const Schedule& sched,
                             double s) {
  const int n = spec.n_qubits;
  if (n > 14) throw CapacityError("dense eigensystem limited to N <= 14");
  const auto [a, b] = sched.eval(s);
  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const Eigen::VectorXd diag = target_diagonal(spec);
  for (Eigen::Index z = 0; z < dim; ++z) {
    h(z, z) = 0.5 * b * diag[z];
    for (int i = 0; i < n; ++i) h(z ^ (Eigen::Index(1) << i), z) += -0.5 * a;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  EigenFrame f;
  f.s = s;
  f.energies = es.eigenvalues();
  f.vectors = es.eigenvectors();
  gauge_fix(f.vectors);
  return f;
}

EigenFrame sector_eigensystem(int n, int p, const Schedule& sched, double s) {
  if (n < 1 || n > 64) throw CapacityError("sector eigensystem needs 1 <= N <= 64");
  const auto [a, b] = sched.eval(s);
  const Eigen::MatrixXd h = spin_block_h(n, n, p, a, b);
  const int dim = n + 1;
  EigenFrame f;
  f.s = s;
  if (p % 2 == 0) {
    auto [plus, minus] = parity_embed(n);
    std::vector<std::pair<double, Eigen::VectorXd>> levels;
    for (const Eigen::MatrixXd* e : {&plus, &minus}) {
      if (e->cols() == 0) continue;
      Eigen::MatrixXd hs = e->transpose() * h * (*e);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hs);
      for (Eigen::Index c = 0; c < es.eigenvalues().size(); ++c)
        levels.emplace_back(es.eigenvalues()[c], (*e) * es.eigenvectors().col(c));
    }
    std::stable_sort(levels.begin(), levels.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    f.energies.resize(dim);
    f.vectors.resize(dim, dim);
    for (int i = 0; i < dim; ++i) {
      f.energies[i] = levels[i].first;
      f.vectors.col(i) = levels[i].second;
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    f.energies = es.eigenvalues();
    f.vectors = es.eigenvectors();
  }
  gauge_fix(f.vectors);
  return f;
}

namespace {

double sector_gap(int n, int p, const Schedule& sched, double s) {
  const EigenFrame f = sector_eigensystem(n, p, sched, s);
  return f.energies[2] - f.energies[0];
}

}  // namespace

GapReport gap_profile(int n, int p, const Schedule& sched, double grid_step) {
  GapReport rep;
  rep.n = n;
  double best = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  for (double s = 0.0; s <= 1.0 + 1e-12; s += grid_step) {
    const double sc = std::min(s, 1.0);
    const double g = sector_gap(n, p, sched, sc);
    rep.profile.emplace_back(sc, g);
    if (g < best) {
      best = g;
      best_s = sc;
    }
  }
  // golden-section refinement around the coarse minimum
  double lo = std::max(0.0, best_s - grid_step);
  double hi = std::min(1.0, best_s + grid_step);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = sector_gap(n, p, sched, x1), f2 = sector_gap(n, p, sched, x2);
  while (hi - lo > 1e-5) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = sector_gap(n, p, sched, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = sector_gap(n, p, sched, x2);
    }
  }
  rep.s_delta = 0.5 * (lo + hi);
  rep.delta = sector_gap(n, p, sched, rep.s_delta);
  return rep;
}

double gap_scaling_fit(const std::vector<int>& ns,
                       const std::vector<double>& deltas) {
  if (ns.size() != deltas.size())
    throw AlignmentError("size/gap lists must align");
  if (ns.size() < 3) throw InsufficientData("need at least 3 sizes for a fit");
  const std::size_t m = ns.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    const double y = std::log(deltas[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::string gap_report_csv(const GapReport& report) {
  std::ostringstream out;
  out.precision(12);
  out << "s,gap_radns\n";
  for (const auto& [s, g] : report.profile) out << s << "," << g << "\n";
  return out.str();
}

std::string gap_report_json(const GapReport& report) {
  std::ostringstream out;
  out.precision(12);
  out << "{\"n\": " << report.n << ", \"delta_radns\": " << report.delta
      << ", \"s_delta\": " << report.s_delta << "}";
  return out.str();
}

}  // namespace annealsim
