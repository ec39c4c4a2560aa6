#pragma once

#include <cmath>
#include <cstddef>

#include "annealsim/errors.hpp"

// Adaptive Gauss-Kronrod 7-15 quadrature on finite intervals, recursive
// bisection. The 7-point Gauss result embedded in the 15-point Kronrod rule
// gives the per-interval error estimate.

namespace annealsim {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// Kronrod abscissae (positive half) and weights; Gauss weights for the
// embedded rule sit at the odd-index abscissae.
inline constexpr double gk_x[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
inline constexpr double gk_wk[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
inline constexpr double gk_wg[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

template <class F>
void gk15(F&& f, double a, double b, double& k15, double& g7) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  k15 = gk_wk[7] * fc;
  g7 = gk_wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * gk_x[j];
    const double sum = f(c - dx) + f(c + dx);
    k15 += gk_wk[j] * sum;
    if (j % 2 == 1) g7 += gk_wg[j / 2] * sum;
  }
  k15 *= h;
  g7 *= h;
}

template <class F>
void gk_adapt(F&& f, double a, double b, double rtol, double atol, int depth,
              QuadResult& acc) {
  double k15, g7;
  gk15(f, a, b, k15, g7);
  acc.evaluations += 15;
  const double err = std::abs(k15 - g7);
  if (err <= atol || err <= rtol * std::abs(k15) || b - a < 1e-14 * std::abs(b - a + 1.0)) {
    acc.value += k15;
    acc.error += err;
    return;
  }
  if (depth <= 0)
    throw QuadratureError("quadrature did not converge: interval refinement exhausted");
  const double c = 0.5 * (a + b);
  gk_adapt(f, a, c, rtol, atol * 0.5, depth - 1, acc);
  gk_adapt(f, c, b, rtol, atol * 0.5, depth - 1, acc);
}

}  // namespace detail

template <class F>
QuadResult gk_quad(F&& f, double a, double b, double rtol = 1e-10,
                   double atol = 1e-14, int max_depth = 48) {
  QuadResult acc;
  if (a == b) return acc;
  detail::gk_adapt(f, a, b, rtol, atol, max_depth, acc);
  return acc;
}

}  // namespace annealsim
