#include "annealsim/svmc.hpp"

#include <algorithm>
#include <cmath>

namespace annealsim {

WalkerState::WalkerState(BasisState z, int n, Xoshiro256pp stream)
    : rng(stream) {
  angles.thetas.resize(n);
  for (int i = 0; i < n; ++i)
    angles.thetas[i] = ((z >> i) & 1ull) ? pi : 0.0;
  resync();
}

void WalkerState::resync() {
  sum_sin = 0.0;
  sum_cos = 0.0;
  for (double th : angles.thetas) {
    sum_sin += std::sin(th);
    sum_cos += std::cos(th);
  }
}

double propose_angle(SvmcVariant variant, Xoshiro256pp& rng, double theta,
                     double a, double b) {
  if (variant == SvmcVariant::plain) return rng.uniform(0.0, pi);
  const double w = (b > 0.0) ? std::min(1.0, a / b) : 1.0;
  double t = theta + rng.uniform(-w * pi, w * pi);
  // one reflection suffices: theta in [0,pi] and |step| <= pi
  if (t < 0.0) t = -t;
  if (t > pi) t = 2.0 * pi - t;
  return t;
}

void svmc_sweep(WalkerState& w, SvmcVariant variant, double a, double b,
                double beta, int p) {
  const int n = static_cast<int>(w.angles.thetas.size());
  for (int i = 0; i < n; ++i) {
    const double th = w.angles.thetas[i];
    const double tn = propose_angle(variant, w.rng, th, a, b);
    const double de =
        delta_E_single_spin(th, tn, w.sum_sin, w.sum_cos, n, a, b, p);
    if (de <= 0.0 || w.rng.uniform() < std::exp(-beta * de)) {
      w.sum_sin += std::sin(tn) - std::sin(th);
      w.sum_cos += std::cos(tn) - std::cos(th);
      w.angles.thetas[i] = tn;
    }
  }
}

BasisState project_to_basis(const AngleConfig& angles) {
  BasisState z = 0;
  for (std::size_t i = 0; i < angles.thetas.size(); ++i)
    if (angles.thetas[i] > 0.5 * pi) z |= (1ull << i);
  return z;
}

int svmc_cycle_sweeps(const AnnealProtocol& proto, int sweeps_tau) {
  if (proto.mode == AnnealProtocol::Mode::forward) return sweeps_tau;
  const double pause =
      (proto.tau > 0.0) ? proto.t_pause * sweeps_tau / proto.tau
                        : proto.t_pause;
  return static_cast<int>(
      std::lround(2.0 * sweeps_tau * (1.0 - proto.s_inv) + pause));
}

std::vector<BasisState> run_svmc(const ProblemSpec& spec, const Schedule& sched,
                                 const AnnealProtocol& proto,
                                 BasisState initial, const SvmcConfig& cfg) {
  proto.validate();
  const int n = spec.n_qubits;
  const int n_sweeps = svmc_cycle_sweeps(proto, cfg.sweeps_tau);

  // same shape as the physical protocol, with time measured in sweeps
  AnnealProtocol sweep_proto = proto;
  sweep_proto.tau = static_cast<double>(cfg.sweeps_tau);
  if (proto.mode == AnnealProtocol::Mode::reverse)
    sweep_proto.t_pause =
        (proto.tau > 0.0) ? proto.t_pause * cfg.sweeps_tau / proto.tau
                          : proto.t_pause;
  const double cycle = sweep_proto.cycle_time();

  std::vector<BasisState> finals(static_cast<std::size_t>(cfg.samples));
  for (int k = 0; k < cfg.samples; ++k) {
    WalkerState w(initial, n, Xoshiro256pp::for_walker(cfg.seed, k));
    for (int r = 0; r < proto.cycles; ++r) {
      for (int j = 0; j < n_sweeps; ++j) {
        const double t = (j + 0.5) * (cycle / n_sweeps);
        const auto [a, b] = sched.eval(sweep_proto.s_of_t(t));
        svmc_sweep(w, cfg.variant, a, b, cfg.beta, spec.p);
        if ((j & 63) == 63) w.resync();
      }
      w.resync();
    }
    finals[static_cast<std::size_t>(k)] = project_to_basis(w.angles);
  }
  return finals;
}

SvmcStats partial_stats(const std::vector<BasisState>& finals, int n) {
  SvmcStats st;
  const double k = static_cast<double>(finals.size());
  if (finals.empty()) return st;
  const BasisState up = all_up_state(n);
  const BasisState down = all_down_state(n);
  double cu = 0.0, cd = 0.0;
  for (BasisState z : finals) {
    if (z == up) cu += 1.0;
    if (z == down) cd += 1.0;
  }
  st.p_up = cu / k;
  st.p_down = cd / k;
  st.total = st.p_up + st.p_down;
  st.std_err = std::sqrt(st.p_up * (1.0 - st.p_up) / k);
  return st;
}

}  // namespace annealsim
