#pragma once

#include <numbers>

#include "annealsim/errors.hpp"

// Internal unit system: hbar = 1, time in ns, energies and rates in rad/ns.
// Schedule files carry GHz in the h = 1 convention, so ingestion multiplies
// by 2*pi once at the boundary.

namespace annealsim {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// k_B / hbar in rad/ns per mK, from CODATA exact values
// 1.380649e-23 J/K / 1.054571817e-34 J*s, scaled to ns and mK.
inline constexpr double kB_over_hbar =
    1.380649e-23 / 1.054571817e-34 * 1e-9 * 1e-3;

inline constexpr double ghz_to_radns(double ghz) { return two_pi * ghz; }

// k_B T / hbar in rad/ns
inline double temperature_to_rate(double t_mk) {
  if (t_mk <= 0.0) throw DomainError("temperature must be positive");
  return kB_over_hbar * t_mk;
}

}  // namespace annealsim
