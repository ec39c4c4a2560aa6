#pragma once

#include <cstdint>
#include <vector>

#include "annealsim/model.hpp"
#include "annealsim/rng.hpp"
#include "annealsim/schedule.hpp"
#include "annealsim/units.hpp"

// Spin-vector Monte Carlo on the planar-rotor energy surface of the p-spin
// model. Each spin is an angle theta in [0, pi]; a sweep Metropolis-updates
// every angle at the instantaneous schedule point. The transverse-field
// variant narrows proposals to a window of half-width min(1, A/B)*pi around
// the current angle, so moves freeze out once the driver is weak. Time is
// counted in sweeps: sweeps_tau plays the role of tau, and a reverse cycle
// costs round(2 * sweeps_tau * (1 - s_inv)) sweeps plus the pause sweeps.

namespace annealsim {

enum class SvmcVariant { plain, tf };

struct SvmcConfig {
  SvmcVariant variant = SvmcVariant::tf;
  int sweeps_tau = 450;
  double beta = 1.0 / temperature_to_rate(12.1);  // inverse rate, ns
  int samples = 1000;
  std::uint64_t seed = 1;
};

struct WalkerState {
  AngleConfig angles;
  double sum_sin = 0.0;
  double sum_cos = 0.0;
  Xoshiro256pp rng;

  WalkerState(BasisState z, int n, Xoshiro256pp stream);

  // recompute the cached sums from the angles
  void resync();
};

// Draw one proposal. The plain variant redraws uniformly on [0, pi]; the
// transverse-field variant perturbs by uniform(-w*pi, w*pi) with
// w = min(1, a/b) and reflects the result back into [0, pi]. Reflection
// keeps the proposal density symmetric, and for w = 1 the folded draw is
// again uniform on [0, pi], so the two variants coincide while a >= b.
double propose_angle(SvmcVariant variant, Xoshiro256pp& rng, double theta,
                     double a, double b);

// one Metropolis sweep over all spins at a fixed schedule point
void svmc_sweep(WalkerState& w, SvmcVariant variant, double a, double b,
                double beta, int p);

// theta <= pi/2 reads as spin up (bit 0)
BasisState project_to_basis(const AngleConfig& angles);

// sweeps in one cycle of the protocol, pause included
int svmc_cycle_sweeps(const AnnealProtocol& proto, int sweeps_tau);

// K independent walkers through the full protocol; returns their projected
// final states in walker order
std::vector<BasisState> run_svmc(const ProblemSpec& spec, const Schedule& sched,
                                 const AnnealProtocol& proto,
                                 BasisState initial, const SvmcConfig& cfg);

struct SvmcStats {
  double total = 0.0;
  double p_up = 0.0;
  double p_down = 0.0;
  double std_err = 0.0;  // binomial standard error of p_up
};

SvmcStats partial_stats(const std::vector<BasisState>& finals, int n);

}  // namespace annealsim
