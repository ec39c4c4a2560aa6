#pragma once

#include <vector>

#include "annealsim/errors.hpp"
#include "annealsim/units.hpp"

namespace annealsim {

// Ohmic environment with exponential cutoff. All frequencies in rad/ns,
// beta in ns (inverse rate). gamma(omega) is the one-sided emission and
// absorption rate entering the weak-coupling dissipator and obeys detailed
// balance: gamma(-w) = exp(-beta*w) * gamma(w).
struct OhmicBath {
  double eta_g2 = 1e-3;
  double omega_c = two_pi * 1000.0;
  double beta = 1.0 / temperature_to_rate(12.1);

  double gamma(double omega) const;
  double gamma0() const { return two_pi * eta_g2 / beta; }

  // second-order frequency shift, principal-value integral of
  // gamma(x) / (omega - x) over the whole axis, divided by 2*pi
  double lamb_shift(double omega) const;
};

// Rate kernel for the polaron-frame transfer rates: convolution of a
// low-frequency Gaussian (width W, centered at four times the
// reorganization energy) with a Lorentzian-weighted Ohmic part. The
// Gaussian center is tied to W and the temperature so detailed balance
// holds exactly for the convolved kernel.
struct HybridSpectrum {
  double eta_g2 = 2.5e-3;
  double omega_c = two_pi * 1000.0;
  double temperature = temperature_to_rate(25.0);
  double width = temperature_to_rate(8.0);

  double beta() const { return 1.0 / temperature; }
  double reorganization() const {
    return 0.5 * width * width / temperature;
  }

  double g_low(double omega) const;
  double g_high(double omega) const;
  double ohmic_gamma(double omega) const;

  // adaptive-quadrature evaluation of the convolution
  double gamma_p(double omega) const;
};

// Uniform-grid cache of gamma_p with local cubic interpolation, clamped at
// zero. Build once per bath over the Bohr-frequency range of the problem,
// then evaluate millions of times during propagation.
class GammaPTable {
 public:
  GammaPTable(const HybridSpectrum& bath, double omega_max, int n_nodes = 4001);

  double operator()(double omega) const;
  double omega_max() const { return omega_max_; }

 private:
  double omega_max_;
  double step_;
  std::vector<double> values_;
};

}  // namespace annealsim
