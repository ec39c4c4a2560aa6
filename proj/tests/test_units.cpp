#include <doctest.h>

#include "annealsim/units.hpp"

using namespace annealsim;

TEST_SUITE("units") {

TEST_CASE("temperature conversion pins") {
  // k_B/hbar in rad/ns/mK from the defining SI constants
  CHECK(kB_over_hbar ==
        doctest::Approx(1.380649e-23 / 1.054571817e-34 * 1e-12).epsilon(1e-14));
  CHECK(kB_over_hbar == doctest::Approx(0.130920).epsilon(5e-5));
  CHECK(temperature_to_rate(12.1) == doctest::Approx(1.58414).epsilon(1e-5));
  CHECK(temperature_to_rate(25.0) == doctest::Approx(3.27301).epsilon(1e-5));
}

TEST_CASE("temperature must be positive") {
  CHECK_THROWS_AS(temperature_to_rate(0.0), DomainError);
  CHECK_THROWS_AS(temperature_to_rate(-3.0), DomainError);
}

TEST_CASE("frequency conversion") {
  CHECK(ghz_to_radns(1.0) == doctest::Approx(two_pi).epsilon(1e-15));
  CHECK(ghz_to_radns(0.0) == 0.0);
  CHECK(two_pi == doctest::Approx(2.0 * pi).epsilon(1e-16));
}

}
