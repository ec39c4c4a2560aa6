#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "annealsim/errors.hpp"

// Embedded Dormand-Prince 5(4) pair with FSAL, adaptive step control on a
// complex state vector. Error weighting is componentwise
//   sc_i = atol * w_i + rtol * max(|y_i|, |y1_i|)
// where w is an optional per-component absolute-tolerance weight. Solvers use
// w to put auxiliary phase components on an absolute-only scale.

namespace annealsim {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 = pick from interval length
  std::int64_t max_steps = 50'000'000;
};

struct OdeStats {
  std::int64_t steps = 0;
  std::int64_t rejected = 0;
  std::int64_t evals = 0;
};

// rhs(t, y, dydt); integrates y in place from t0 to t1 (t1 > t0).
template <class F>
OdeStats integrate_dp5(F&& rhs, double t0, double t1, Eigen::VectorXcd& y,
                       const OdeOptions& opt,
                       const Eigen::VectorXd* atol_weights = nullptr) {
  using Vec = Eigen::VectorXcd;
  const Eigen::Index n = y.size();
  OdeStats stats;
  if (t1 <= t0) return stats;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y1(n);

  double t = t0;
  double h = opt.initial_step > 0 ? opt.initial_step : (t1 - t0) / 100.0;
  h = std::min({h, opt.max_step, t1 - t0});

  rhs(t, y, k1);
  ++stats.evals;
  bool fsal_valid = true;

  while (t < t1) {
    if (stats.steps + stats.rejected > opt.max_steps)
      throw IntegrationError("step budget exhausted");
    h = std::min({h, opt.max_step, t1 - t});
    if (h < 1e-14 * (t1 - t0))
      throw StiffnessError("step size underflow");

    if (!fsal_valid) {
      rhs(t, y, k1);
      ++stats.evals;
      fsal_valid = true;
    }

    ytmp = y + h * (a21 * k1);
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, y1, k7);
    stats.evals += 6;

    // weighted RMS error of the embedded difference
    double err2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::complex<double> e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
               e6 * k6[i] + e7 * k7[i]);
      const double w = atol_weights ? (*atol_weights)[i] : 1.0;
      const double sc =
          opt.atol * w +
          opt.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      const double q = std::abs(e) / sc;
      err2 += q * q;
    }
    const double err = std::sqrt(err2 / static_cast<double>(n));

    if (err <= 1.0) {
      t += h;
      y.swap(y1);
      k1.swap(k7);  // FSAL
      ++stats.steps;
      const double f =
          err == 0.0 ? 5.0
                     : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= f;
    } else {
      ++stats.rejected;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      // k1 still valid at t
    }
  }
  return stats;
}

}  // namespace annealsim
