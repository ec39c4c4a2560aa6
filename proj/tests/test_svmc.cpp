#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "annealsim/quad.hpp"
#include "annealsim/svmc.hpp"
#include "annealsim/units.hpp"

using namespace annealsim;

namespace {

const Schedule& sched() {
  static Schedule s =
      load_schedule_file(std::string(ANNEALSIM_DATA_DIR) + "/dw2000q_schedule.csv");
  return s;
}

AnnealProtocol reverse(double tau, double s_inv, double t_pause = 0.0) {
  AnnealProtocol p;
  p.tau = tau;
  p.s_inv = s_inv;
  p.t_pause = t_pause;
  return p;
}

}  // namespace

TEST_SUITE("svmc") {

TEST_CASE("walker construction and projection are inverse at the poles") {
  WalkerState w(0b0101, 4, Xoshiro256pp(1));
  CHECK(w.angles.thetas[0] == doctest::Approx(pi));
  CHECK(w.angles.thetas[1] == doctest::Approx(0.0));
  CHECK(w.angles.thetas[2] == doctest::Approx(pi));
  CHECK(w.angles.thetas[3] == doctest::Approx(0.0));
  CHECK(project_to_basis(w.angles) == 0b0101);
  CHECK(w.sum_cos == doctest::Approx(0.0));
  CHECK(w.sum_sin == doctest::Approx(0.0));
}

TEST_CASE("projection maps the equator to up") {
  AngleConfig cfg;
  cfg.thetas = {pi / 2, pi / 2 + 1e-9, pi / 2 - 1e-9};
  CHECK(project_to_basis(cfg) == 0b010);
}

TEST_CASE("cached sums track sweeps") {
  WalkerState w(0b001, 3, Xoshiro256pp(9));
  for (int k = 0; k < 50; ++k) svmc_sweep(w, SvmcVariant::plain, 1.3, 0.4, 2.0, 2);
  const double ssin = w.sum_sin, scos = w.sum_cos;
  w.resync();
  CHECK(w.sum_sin == doctest::Approx(ssin).epsilon(1e-10));
  CHECK(w.sum_cos == doctest::Approx(scos).epsilon(1e-10));
}

TEST_CASE("tf proposals stay inside the reflected window") {
  Xoshiro256pp rng(17);
  // b > a: window narrower than the full interval
  const double a = 0.3, b = 1.5;
  const double w = a / b * pi;
  for (int k = 0; k < 5000; ++k) {
    const double theta = rng.uniform(0.0, pi);
    const double prop = propose_angle(SvmcVariant::tf, rng, theta, a, b);
    CHECK(prop >= 0.0);
    CHECK(prop <= pi);
    // after reflection the proposal lies within the window distance of the
    // current angle measured on the folded line
    const double d = std::min({std::abs(prop - theta), prop + theta,
                               2.0 * pi - prop - theta});
    CHECK(d <= w + 1e-12);
  }
}

TEST_CASE("tf proposals at weak target coincide with plain in law") {
  // for a >= b the window is the whole interval and folding a full-width
  // uniform perturbation is again uniform: compare empirical CDFs
  Xoshiro256pp rng(23);
  const int k = 40000;
  std::vector<double> tf;
  tf.reserve(k);
  for (int i = 0; i < k; ++i)
    tf.push_back(propose_angle(SvmcVariant::tf, rng, 2.1, 2.0, 1.0));
  std::sort(tf.begin(), tf.end());
  double ks = 0.0;
  for (int i = 0; i < k; ++i)
    ks = std::max(ks, std::abs((i + 1.0) / k - tf[i] / pi));
  // one-sample Kolmogorov-Smirnov against U(0, pi), 1e-3 significance
  CHECK(ks < 1.95 / std::sqrt(double(k)));
}

TEST_CASE("single-rotor chain samples the boltzmann density") {
  // fixed schedule point, one spin: stationary density on [0, pi] is
  // proportional to exp(-beta E(theta)) under uniform proposals. Note the
  // even-p surface is symmetric under theta -> pi - theta, so the odd
  // moment <cos> carries no signal; check <sin> and <cos^2> instead.
  const double s = 0.1;  // driver dominant: single well, fast mixing
  const double a = sched().a(s), b = sched().b(s);
  const double beta = 0.3;
  WalkerState w(0b0, 1, Xoshiro256pp(5));
  const int burn = 2000, keep = 200000;
  for (int i = 0; i < burn; ++i) svmc_sweep(w, SvmcVariant::plain, a, b, beta, 2);
  double mean_sin = 0.0, mean_cos2 = 0.0;
  for (int i = 0; i < keep; ++i) {
    svmc_sweep(w, SvmcVariant::plain, a, b, beta, 2);
    const double th = w.angles.thetas[0];
    mean_sin += std::sin(th);
    mean_cos2 += std::cos(th) * std::cos(th);
  }
  mean_sin /= keep;
  mean_cos2 /= keep;

  const auto weight = [&](double th) {
    return std::exp(-beta * (-0.5 * a * std::sin(th) -
                             0.5 * b * std::cos(th) * std::cos(th)));
  };
  const double z = gk_quad(weight, 0.0, pi).value;
  const double want_sin =
      gk_quad([&](double th) { return std::sin(th) * weight(th); }, 0.0, pi)
          .value / z;
  const double want_cos2 =
      gk_quad([&](double th) { return std::cos(th) * std::cos(th) * weight(th); },
              0.0, pi).value / z;
  // correlated samples: generous absolute tolerance
  CHECK(std::abs(mean_sin - want_sin) < 0.01);
  CHECK(std::abs(mean_cos2 - want_cos2) < 0.01);
}

TEST_CASE("sweep count bookkeeping") {
  CHECK(svmc_cycle_sweeps(reverse(1000.0, 0.2), 1000) == 1600);
  CHECK(svmc_cycle_sweeps(reverse(1000.0, 0.5), 450) == 450);
  // pause converts to sweeps with the same sweeps-per-ns ratio
  CHECK(svmc_cycle_sweeps(reverse(1000.0, 0.5, 500.0), 1000) == 1500);
}

TEST_CASE("runs are deterministic given a seed and walker count") {
  SvmcConfig cfg;
  cfg.samples = 64;
  cfg.seed = 77;
  cfg.sweeps_tau = 100;
  const auto proto = reverse(1000.0, 0.4);
  const auto a = run_svmc(ProblemSpec{4, 2}, sched(), proto, 0b0001, cfg);
  const auto b = run_svmc(ProblemSpec{4, 2}, sched(), proto, 0b0001, cfg);
  REQUIRE(a.size() == 64);
  CHECK(a == b);

  // adding walkers must not disturb the earlier streams
  cfg.samples = 96;
  const auto c = run_svmc(ProblemSpec{4, 2}, sched(), proto, 0b0001, cfg);
  CHECK(std::equal(a.begin(), a.end(), c.begin()));
}

TEST_CASE("statistics of the projected finals") {
  std::vector<BasisState> finals = {0, 0, 0b1111, 0b0011, 0, 0b1111, 0b0001, 0};
  const auto st = partial_stats(finals, 4);
  CHECK(st.p_up == doctest::Approx(0.5));
  CHECK(st.p_down == doctest::Approx(0.25));
  CHECK(st.total == doctest::Approx(0.75));
  CHECK(st.std_err ==
        doctest::Approx(std::sqrt(0.5 * 0.5 / 8.0)).epsilon(1e-12));
}

TEST_CASE("frozen proposals at strong target lock the state") {
  // deep in the anneal the window collapses and walkers cannot move between
  // wells: starting from the excited well they must stay there
  SvmcConfig cfg;
  cfg.variant = SvmcVariant::tf;
  cfg.samples = 200;
  cfg.seed = 3;
  cfg.sweeps_tau = 1000;
  const auto finals =
      run_svmc(ProblemSpec{4, 2}, sched(), reverse(1000.0, 0.85), 0b0001, cfg);
  const auto st = partial_stats(finals, 4);
  CHECK(st.total < 0.02);
}

}
