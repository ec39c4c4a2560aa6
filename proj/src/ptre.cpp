#include "annealsim/ptre.hpp"

#include <cmath>
#include <vector>

namespace annealsim {

namespace {

double bohr_range(const ProblemSpec& spec, const Schedule& sched) {
  const Eigen::VectorXd e = target_diagonal(spec);
  double bmax = 0.0;
  for (int j = 0; j <= 1000; ++j)
    bmax = std::max(bmax, sched.eval(j / 1000.0).b);
  return 0.5 * bmax * (e.maxCoeff() - e.minCoeff()) + 5.0;
}

}  // namespace

PtreEngine::PtreEngine(const ProblemSpec& spec, const Schedule& sched,
                       PtreConfig cfg)
    : spec_(spec), cfg_(cfg), sched_(&sched), target_(target_diagonal(spec)),
      table_(cfg.bath, bohr_range(spec, sched), cfg.table_nodes) {}

double PtreEngine::bohr_frequency(BasisState z, double s) const {
  return 0.5 * sched_->eval(s).b * target_[static_cast<Eigen::Index>(z)];
}

// gain(y * n + i): rate of the y -> y^bit(i) transition
void PtreEngine::fill_rates(double s, Eigen::VectorXd& gain) const {
  const auto [a, b] = sched_->eval(s);
  const double pref = 0.25 * a * a;
  const Eigen::Index dim = target_.size();
  const int n = spec_.n_qubits;
  for (Eigen::Index y = 0; y < dim; ++y)
    for (int i = 0; i < n; ++i) {
      const Eigen::Index x = y ^ (Eigen::Index(1) << i);
      const double w = 0.5 * b * (target_[y] - target_[x]);
      gain[y * n + i] = pref * table_(w);
    }
}

Eigen::SparseMatrix<double> PtreEngine::transfer_matrix(double s) const {
  const Eigen::Index dim = target_.size();
  const int n = spec_.n_qubits;
  Eigen::VectorXd gain(dim * n);
  fill_rates(s, gain);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(dim) * (n + 1));
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index y = 0; y < dim; ++y)
    for (int i = 0; i < n; ++i) {
      const Eigen::Index x = y ^ (Eigen::Index(1) << i);
      const double r = gain[y * n + i];
      trip.emplace_back(static_cast<int>(x), static_cast<int>(y), r);
      diag[y] -= r;
    }
  for (Eigen::Index y = 0; y < dim; ++y)
    trip.emplace_back(static_cast<int>(y), static_cast<int>(y), diag[y]);
  Eigen::SparseMatrix<double> t(dim, dim);
  t.setFromTriplets(trip.begin(), trip.end());
  return t;
}

PtreResult PtreEngine::run(BasisState z0, const AnnealProtocol& proto) const {
  proto.validate();
  const Eigen::Index dim = target_.size();
  const int n = spec_.n_qubits;
  Eigen::VectorXcd p = Eigen::VectorXcd::Zero(dim);
  p[static_cast<Eigen::Index>(z0)] = 1.0;

  Eigen::VectorXd gain(dim * n);
  auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    fill_rates(proto.s_of_t(t), gain);
    dy.setZero();
    for (Eigen::Index z = 0; z < dim; ++z)
      for (int i = 0; i < n; ++i) {
        const Eigen::Index x = z ^ (Eigen::Index(1) << i);
        const std::complex<double> flow = gain[z * n + i] * y[z];
        dy[x] += flow;
        dy[z] -= flow;
      }
  };

  PtreResult out;
  for (int cycle = 0; cycle < proto.cycles; ++cycle) {
    double prev = 0.0;
    auto edges = proto.branch_times();
    edges.push_back(proto.cycle_time());
    for (double edge : edges) {
      if (edge - prev > 0.0) {
        OdeStats st = integrate_dp5(rhs, prev, edge, p, cfg_.ode);
        out.stats.steps += st.steps;
        out.stats.rejected += st.rejected;
        out.stats.evals += st.evals;
      }
      prev = edge;
    }
  }

  out.populations = p.real();
  out.p_up = out.populations[static_cast<Eigen::Index>(
      all_up_state(spec_.n_qubits))];
  out.p_down = out.populations[static_cast<Eigen::Index>(
      all_down_state(spec_.n_qubits))];
  return out;
}

Eigen::VectorXd stationary_distribution(const Eigen::SparseMatrix<double>& t) {
  const Eigen::Index dim = t.rows();
  if (dim > 4096) throw CapacityError("stationary solve is dense, keep n small");
  Eigen::MatrixXd a = Eigen::MatrixXd(t);
  a.row(dim - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  b[dim - 1] = 1.0;
  Eigen::VectorXd p = a.fullPivLu().solve(b);
  return p;
}

Eigen::VectorXd gibbs_distribution(const ProblemSpec& spec,
                                   const Schedule& sched, double s,
                                   double beta) {
  const Eigen::VectorXd e = target_diagonal(spec);
  const double b = sched.eval(s).b;
  Eigen::ArrayXd w = (-beta * 0.5 * b * (e.array() - e.minCoeff())).exp();
  return (w / w.sum()).matrix();
}

}  // namespace annealsim
