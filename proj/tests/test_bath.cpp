#include <doctest.h>

#include <cmath>

#include "annealsim/bath.hpp"
#include "annealsim/units.hpp"

using namespace annealsim;

TEST_SUITE("bath") {

TEST_CASE("ohmic rate obeys detailed balance") {
  OhmicBath bath;
  for (double w : {0.01, 0.3, 2.0, 20.0}) {
    const double ratio = bath.gamma(-w) / bath.gamma(w);
    CHECK(ratio == doctest::Approx(std::exp(-bath.beta * w)).epsilon(1e-12));
  }
}

TEST_CASE("ohmic rate is smooth through zero") {
  OhmicBath bath;
  CHECK(bath.gamma(0.0) == doctest::Approx(bath.gamma0()).epsilon(1e-12));
  // the series branch must join the direct formula seamlessly
  const double series_side = bath.gamma(0.9999e-4 / bath.beta);
  const double direct_side = bath.gamma(1.0001e-4 / bath.beta);
  CHECK(series_side == doctest::Approx(direct_side).epsilon(1e-7));
  // linear growth with small slope beta/2 relative to gamma0
  const double w = 1e-3;
  CHECK(bath.gamma(w) - bath.gamma(-w) ==
        doctest::Approx(bath.gamma0() * bath.beta * w).epsilon(1e-4));
}

TEST_CASE("cutoff suppresses high frequencies") {
  OhmicBath bath;
  bath.omega_c = 10.0;
  CHECK(bath.gamma(100.0) / bath.gamma(1.0) < 1e-2);
}

TEST_CASE("hybrid kernel pins against independent quadrature") {
  // reference values from an independent adaptive-quadrature evaluation of
  // the same convolution at the production parameter point
  HybridSpectrum bath;
  CHECK(bath.gamma_p(-10.0) == doctest::Approx(3.726833481556e-04).epsilon(2e-5));
  CHECK(bath.gamma_p(-1.0) == doctest::Approx(8.407653797895e-01).epsilon(2e-5));
  CHECK(bath.gamma_p(-0.1) == doctest::Approx(1.075229665632e+00).epsilon(2e-5));
  CHECK(bath.gamma_p(0.0) == doctest::Approx(1.092979434175e+00).epsilon(2e-5));
  CHECK(bath.gamma_p(0.1) == doctest::Approx(1.108588185819e+00).epsilon(2e-5));
  CHECK(bath.gamma_p(1.0) == doctest::Approx(1.141208241973e+00).epsilon(2e-5));
  CHECK(bath.gamma_p(10.0) == doctest::Approx(7.911170381782e-03).epsilon(2e-5));
  CHECK(bath.gamma_p(50.0) == doctest::Approx(1.266055721666e-03).epsilon(2e-5));
}

TEST_CASE("hybrid kernel obeys detailed balance exactly") {
  // the Gaussian center 4 eps_L with eps_L = beta W^2 / 2 makes the low
  // branch satisfy the same exponential tilt as the Ohmic branch, so the
  // convolution inherits it
  HybridSpectrum bath;
  const double beta = bath.beta();
  for (double w : {0.05, 0.5, 1.0, 3.0, 8.0}) {
    const double ratio = bath.gamma_p(w) / bath.gamma_p(-w);
    CHECK(ratio == doctest::Approx(std::exp(beta * w)).epsilon(1e-7));
  }
}

TEST_CASE("rate table reproduces direct evaluation") {
  HybridSpectrum bath;
  GammaPTable table(bath, 40.0, 2001);
  for (double w : {-35.0, -7.3, -0.42, 0.0, 0.17, 3.9, 21.0, 39.5}) {
    const double direct = bath.gamma_p(w);
    const double interp = table(w);
    CHECK(interp == doctest::Approx(direct).epsilon(1e-6));
  }
  CHECK_THROWS_AS(table(41.0), RangeError);
}

TEST_CASE("rate table guards degenerate construction") {
  HybridSpectrum bath;
  CHECK_THROWS_AS(GammaPTable(bath, 10.0, 2), DomainError);
  CHECK_THROWS_AS(GammaPTable(bath, -1.0), DomainError);
}

TEST_CASE("lamb shift integral is finite and odd-dominated at large omega") {
  OhmicBath bath;
  bath.omega_c = 5.0;  // keep the integration span small for speed
  const double s1 = bath.lamb_shift(1.0);
  CHECK(std::isfinite(s1));
  CHECK(s1 != 0.0);
}

}
