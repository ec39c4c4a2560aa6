#include "annealsim/bath.hpp"

#include <algorithm>
#include <cmath>

#include "annealsim/quad.hpp"

namespace annealsim {

double OhmicBath::gamma(double omega) const {
  const double x = beta * omega;
  const double cut = std::exp(-std::abs(omega) / omega_c);
  if (std::abs(x) < 1e-4) {
    // omega / (1 - exp(-beta*omega)) expanded around zero
    return gamma0() * cut * (1.0 + 0.5 * x + x * x / 12.0);
  }
  return two_pi * eta_g2 * omega * cut / (-std::expm1(-x));
}

double OhmicBath::lamb_shift(double omega) const {
  // principal value via the symmetric difference around the pole
  const double span = 50.0 * omega_c + std::abs(omega);
  const auto integrand = [&](double u) {
    return (gamma(omega - u) - gamma(omega + u)) / u;
  };
  // integrand is finite at u -> 0 (limit -2 gamma'(omega)); start a hair away
  const double eps = 1e-9 * omega_c;
  const auto r = gk_quad(integrand, eps, span, 1e-9, 1e-12);
  return r.value / two_pi;
}

double HybridSpectrum::ohmic_gamma(double omega) const {
  OhmicBath b{eta_g2, omega_c, beta()};
  return b.gamma(omega);
}

double HybridSpectrum::g_low(double omega) const {
  const double w2 = width * width;
  const double u = omega - 4.0 * reorganization();
  return std::sqrt(pi / (2.0 * w2)) * std::exp(-u * u / (8.0 * w2));
}

double HybridSpectrum::g_high(double omega) const {
  const double g0 = ohmic_gamma(0.0);
  return 4.0 * ohmic_gamma(omega) / (omega * omega + 4.0 * g0 * g0);
}

double HybridSpectrum::gamma_p(double omega) const {
  // integrand G_L(omega - x) G_H(x): a Gaussian window around
  // x = omega - 4 eps_L sampling the Ohmic part, plus a narrow Lorentzian
  // peak of G_H at x = 0 that only matters when the window reaches it
  const double c = omega - 4.0 * reorganization();
  const double pad = 30.0 * width + 20.0 * ohmic_gamma(0.0);
  const double lo = std::min(c - pad, -pad);
  const double hi = std::max(c + pad, pad);
  const auto f = [&](double x) { return g_low(omega - x) * g_high(x); };
  double total = 0.0;
  // split at zero: the cutoff factor has a kink there
  if (lo < 0.0 && hi > 0.0) {
    total += gk_quad(f, lo, 0.0, 1e-10, 1e-300).value;
    total += gk_quad(f, 0.0, hi, 1e-10, 1e-300).value;
  } else {
    total += gk_quad(f, lo, hi, 1e-10, 1e-300).value;
  }
  return total / two_pi;
}

GammaPTable::GammaPTable(const HybridSpectrum& bath, double omega_max,
                         int n_nodes)
    : omega_max_(omega_max) {
  if (n_nodes < 4) throw DomainError("rate table needs at least four nodes");
  if (!(omega_max > 0.0)) throw DomainError("rate table range must be positive");
  step_ = 2.0 * omega_max / (n_nodes - 1);
  values_.resize(n_nodes);
  for (int j = 0; j < n_nodes; ++j)
    values_[j] = bath.gamma_p(-omega_max + j * step_);
}

double GammaPTable::operator()(double omega) const {
  if (std::abs(omega) > omega_max_)
    throw RangeError("rate requested outside the cached Bohr range");
  const int n = static_cast<int>(values_.size());
  double u = (omega + omega_max_) / step_;
  int j = std::clamp(static_cast<int>(u), 0, n - 2);
  const double th = u - j;
  const double f0 = values_[j], f1 = values_[j + 1];
  // local cubic with centered slopes, one-sided at the edges
  const double m0 = (j > 0) ? 0.5 * (f1 - values_[j - 1]) : f1 - f0;
  const double m1 = (j + 2 < n) ? 0.5 * (values_[j + 2] - f0) : f1 - f0;
  const double th2 = th * th, th3 = th2 * th;
  const double v = (2 * th3 - 3 * th2 + 1) * f0 + (th3 - 2 * th2 + th) * m0 +
                   (-2 * th3 + 3 * th2) * f1 + (th3 - th2) * m1;
  return std::max(v, 0.0);
}

}  // namespace annealsim
