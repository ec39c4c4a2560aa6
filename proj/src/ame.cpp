#include "annealsim/ame.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace annealsim {

namespace {

std::vector<const Eigen::MatrixXd*> coupling_set(const SpinBasis& basis,
                                                 const Eigen::MatrixXd& coll,
                                                 BathCoupling coupling) {
  std::vector<const Eigen::MatrixXd*> ops;
  if (coupling == BathCoupling::collective) {
    ops.push_back(&coll);
  } else {
    for (int i = 0; i < basis.n(); ++i) ops.push_back(&basis.z_op(i));
  }
  return ops;
}

}  // namespace

AmeEngine::AmeEngine(const ProblemSpec& spec, const Schedule& sched,
                     AmeConfig cfg)
    : spec_(spec), cfg_(cfg), basis_(spec.n_qubits), geom_(basis_, spec.p),
      collective_op_(basis_.two_m_values().cast<double>().asDiagonal()),
      table_(geom_, sched,
             lowest_levels_at_anchor(
                 geom_, sched, 1.0,
                 cfg.n_levels > 0
                     ? std::min(cfg.n_levels, geom_.total_levels)
                     : geom_.total_levels),
             coupling_set(basis_, collective_op_, cfg.coupling),
             cfg.table_nodes) {
  if (cfg_.lamb_shift) {
    // frequency-shift cache over the spectral range seen anywhere in s
    const int nk = table_.n_kept();
    Eigen::VectorXd e(nk);
    Eigen::MatrixXd m;
    std::vector<Eigen::MatrixXd> ops;
    double spread = 0.0;
    for (int j = 0; j <= 100; ++j) {
      table_.interp(j / 100.0, e, m, ops);
      spread = std::max(spread, e.maxCoeff() - e.minCoeff());
    }
    lamb_omega_max_ = spread + 1.0;
    const int nodes = 4001;
    lamb_step_ = 2.0 * lamb_omega_max_ / (nodes - 1);
    lamb_grid_.resize(nodes);
    for (int j = 0; j < nodes; ++j)
      lamb_grid_[j] = cfg_.bath.lamb_shift(-lamb_omega_max_ + j * lamb_step_);
  }
}

double AmeEngine::lamb_at(double omega) const {
  const int n = static_cast<int>(lamb_grid_.size());
  double u = (omega + lamb_omega_max_) / lamb_step_;
  int j = std::clamp(static_cast<int>(u), 0, n - 2);
  const double th = u - j;
  return (1.0 - th) * lamb_grid_[j] + th * lamb_grid_[j + 1];
}

Eigen::VectorXd AmeEngine::basis_row(BasisState z, double s) const {
  return basis_.U().row(static_cast<Eigen::Index>(z)) *
         table_.kept_vectors_at(s);
}

double AmeEngine::population(BasisState z, const Eigen::MatrixXcd& rho,
                             double s) const {
  const Eigen::VectorXcd row = basis_row(z, s).cast<std::complex<double>>();
  return std::real(row.dot(rho * row));
}

void AmeEngine::apply_generator(double sdot, const Eigen::VectorXd& energies,
                                const Eigen::MatrixXd& coupling,
                                const std::vector<Eigen::MatrixXd>& ops,
                                const Eigen::MatrixXcd& rho,
                                Eigen::MatrixXcd& out) const {
  const int nk = table_.n_kept();
  const int n_ops = static_cast<int>(ops.size());
  const double wcut = cfg_.secular_window;

  out.noalias() = -sdot * (coupling * rho - rho * coupling);

  // one-sided rates for every ordered level pair (p, q): gamma(E_q - E_p)
  Eigen::MatrixXd gm(nk, nk);
  for (int p = 0; p < nk; ++p)
    for (int q = 0; q < nk; ++q)
      gm(p, q) = cfg_.bath.gamma(energies[q] - energies[p]);

  // transition list sorted by frequency, with per-operator matrix elements
  struct Pair {
    double omega, gamma;
    int a, c;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(nk) * nk);
  std::vector<double> amp;
  amp.reserve(static_cast<std::size_t>(nk) * nk * n_ops);
  for (int a = 0; a < nk; ++a)
    for (int c = 0; c < nk; ++c) {
      double mx = 0.0;
      for (int i = 0; i < n_ops; ++i)
        mx = std::max(mx, std::abs(ops[i](a, c)));
      if (mx < 1e-14) continue;
      pairs.push_back({energies[c] - energies[a], gm(a, c), a, c});
      for (int i = 0; i < n_ops; ++i) amp.push_back(ops[i](a, c));
    }
  const int np = static_cast<int>(pairs.size());
  std::vector<int> order(np);
  for (int i = 0; i < np; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return pairs[x].omega < pairs[y].omega;
  });

  // sandwich term: pairs (a,c) and (b,d) interfere only when their
  // frequencies agree within the matching tolerance
  int lo = 0;
  for (int i1 = 0; i1 < np; ++i1) {
    const Pair& p1 = pairs[order[i1]];
    while (lo < np && pairs[order[lo]].omega < p1.omega - wcut) ++lo;
    for (int i2 = lo; i2 < np; ++i2) {
      const Pair& p2 = pairs[order[i2]];
      const double dw = p2.omega - p1.omega;
      if (dw > wcut) break;
      double dot = 0.0;
      const double* a1 = &amp[static_cast<std::size_t>(order[i1]) * n_ops];
      const double* a2 = &amp[static_cast<std::size_t>(order[i2]) * n_ops];
      for (int i = 0; i < n_ops; ++i) dot += a1[i] * a2[i];
      if (dot == 0.0) continue;
      const double coeff = 0.5 * (p1.gamma + p2.gamma) * dot;
      out(p1.a, p2.a) += coeff * rho(p1.c, p2.c);
    }
  }

  // matched no-jump part, built over the same pair set so the trace is
  // conserved identically
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nk, nk);
  for (int c = 0; c < nk; ++c)
    for (int d = c; d < nk; ++d) {
      if (std::abs(energies[d] - energies[c]) > wcut) continue;
      double acc = 0.0;
      for (int a = 0; a < nk; ++a) {
        double dot = 0.0;
        for (int i = 0; i < n_ops; ++i) dot += ops[i](a, c) * ops[i](a, d);
        acc += 0.5 * (gm(a, c) + gm(a, d)) * dot;
      }
      k(c, d) = acc;
      k(d, c) = k(c, d);
    }
  out.noalias() -= 0.5 * (k * rho + rho * k);

  if (cfg_.lamb_shift) {
    Eigen::MatrixXd hls = Eigen::MatrixXd::Zero(nk, nk);
    for (int c = 0; c < nk; ++c)
      for (int d = c; d < nk; ++d) {
        if (std::abs(energies[d] - energies[c]) > wcut) continue;
        double acc = 0.0;
        for (int a = 0; a < nk; ++a) {
          double dot = 0.0;
          for (int i = 0; i < n_ops; ++i) dot += ops[i](a, c) * ops[i](a, d);
          acc += 0.5 *
                 (lamb_at(energies[c] - energies[a]) +
                  lamb_at(energies[d] - energies[a])) *
                 dot;
        }
        hls(c, d) = acc;
        hls(d, c) = hls(c, d);
      }
    const std::complex<double> mi(0.0, -1.0);
    out.noalias() += mi * (hls * rho - rho * hls);
  }
}

void AmeEngine::integrate_branch(double s_from, double s_to, double tau,
                                 double t_hold, Eigen::MatrixXcd& rho,
                                 OdeStats& stats) const {
  const bool hold = t_hold > 0.0;
  const double duration = hold ? t_hold : std::abs(s_to - s_from) * tau;
  if (duration <= 0.0) return;
  const double sdot = hold ? 0.0 : (s_to > s_from ? 1.0 : -1.0) / tau;

  const int nk = table_.n_kept();
  const Eigen::VectorXd theta0 =
      hold ? Eigen::VectorXd::Zero(nk)
           : (table_.energy_integral(s_from) / sdot).eval();

  Eigen::VectorXd energies(nk), theta(nk);
  Eigen::MatrixXd coupling(nk, nk);
  std::vector<Eigen::MatrixXd> ops;
  Eigen::MatrixXcd r(nk, nk), g(nk, nk);
  Eigen::VectorXcd ph(nk);

  Eigen::VectorXd e_hold(nk);
  Eigen::MatrixXd m_hold;
  std::vector<Eigen::MatrixXd> ops_hold;
  if (hold) table_.interp(s_from, e_hold, m_hold, ops_hold);

  auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    if (hold) {
      theta = e_hold * t;
    } else {
      const double s = s_from + sdot * t;
      table_.interp(s, energies, coupling, ops);
      theta = table_.energy_integral(s) / sdot - theta0;
    }
    for (int a = 0; a < nk; ++a) ph[a] = std::polar(1.0, theta[a]);
    const Eigen::Map<const Eigen::MatrixXcd> ym(y.data(), nk, nk);
    for (int b = 0; b < nk; ++b)
      for (int a = 0; a < nk; ++a)
        r(a, b) = std::conj(ph[a]) * ym(a, b) * ph[b];
    if (hold)
      apply_generator(0.0, e_hold, m_hold, ops_hold, r, g);
    else
      apply_generator(sdot, energies, coupling, ops, r, g);
    Eigen::Map<Eigen::MatrixXcd> dm(dy.data(), nk, nk);
    for (int b = 0; b < nk; ++b)
      for (int a = 0; a < nk; ++a)
        dm(a, b) = ph[a] * g(a, b) * std::conj(ph[b]);
  };

  Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho.data(), nk * nk);
  OdeStats st = integrate_dp5(rhs, 0.0, duration, y, cfg_.ode);
  stats.steps += st.steps;
  stats.rejected += st.rejected;
  stats.evals += st.evals;
  rho = Eigen::Map<const Eigen::MatrixXcd>(y.data(), nk, nk);

  // fold the end-of-branch phases into the envelope
  if (hold) {
    theta = e_hold * duration;
  } else {
    theta = table_.energy_integral(s_to) / sdot - theta0;
  }
  for (int a = 0; a < nk; ++a) ph[a] = std::polar(1.0, -theta[a]);
  for (int b = 0; b < nk; ++b)
    for (int a = 0; a < nk; ++a)
      rho(a, b) *= ph[a] * std::conj(ph[b]);
}

AmeResult AmeEngine::run(BasisState z0, const AnnealProtocol& proto) const {
  proto.validate();
  const double s_start =
      proto.mode == AnnealProtocol::Mode::reverse ? 1.0 : 0.0;
  const Eigen::VectorXd c0 = basis_row(z0, s_start);
  Eigen::MatrixXcd rho =
      (c0 * c0.transpose()).cast<std::complex<double>>();

  AmeResult out;
  if (proto.mode == AnnealProtocol::Mode::forward) {
    integrate_branch(0.0, 1.0, proto.tau, 0.0, rho, out.stats);
  } else {
    for (int cycle = 0; cycle < proto.cycles; ++cycle) {
      integrate_branch(1.0, proto.s_inv, proto.tau, 0.0, rho, out.stats);
      if (proto.t_pause > 0.0)
        integrate_branch(proto.s_inv, proto.s_inv, proto.tau, proto.t_pause,
                         rho, out.stats);
      integrate_branch(proto.s_inv, 1.0, proto.tau, 0.0, rho, out.stats);
    }
  }

  out.p_up = population(all_up_state(spec_.n_qubits), rho, 1.0);
  out.p_down = population(all_down_state(spec_.n_qubits), rho, 1.0);
  out.trace = std::real(rho.trace());
  out.rho = std::move(rho);
  return out;
}

}  // namespace annealsim
