#include <doctest.h>

#include <Eigen/Dense>
#include <bit>
#include <cmath>

#include "annealsim/model.hpp"
#include "annealsim/rng.hpp"
#include "annealsim/schedule.hpp"
#include "annealsim/units.hpp"

using namespace annealsim;

namespace {

Schedule flat_sched(double a, double b) {
  return Schedule({0.0, 1.0}, {a, a}, {b, b}, "flat");
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("target diagonal follows -N m^p") {
  ProblemSpec spec{4, 2};
  const Eigen::VectorXd d = target_diagonal(spec);
  REQUIRE(d.size() == 16);
  CHECK(d[0] == doctest::Approx(-4.0));       // all up, m = 1
  CHECK(d[0b1111] == doctest::Approx(-4.0));  // all down, m = -1
  CHECK(d[0b0001] == doctest::Approx(-1.0));  // m = 1/2
  CHECK(d[0b0011] == doctest::Approx(0.0));   // m = 0
  CHECK(d[0b0111] == doctest::Approx(-1.0));  // m = -1/2
}

TEST_CASE("odd p breaks the up-down symmetry of the target") {
  ProblemSpec spec{3, 3};
  const Eigen::VectorXd d = target_diagonal(spec);
  CHECK(d[0] == doctest::Approx(-3.0));
  CHECK(d[0b111] == doctest::Approx(3.0));
}

TEST_CASE("driver flips exactly one bit at a time") {
  ProblemSpec spec{3, 2};
  const Eigen::SparseMatrix<double> hd = driver_matrix(spec);
  CHECK(hd.nonZeros() == 3 * 8);
  for (int z = 0; z < 8; ++z)
    for (int i = 0; i < 3; ++i)
      CHECK(hd.coeff(z ^ (1 << i), z) == doctest::Approx(-1.0));
  CHECK(hd.coeff(0b101, 0b010) == 0.0);
  Eigen::MatrixXd dense = Eigen::MatrixXd(hd);
  CHECK((dense - dense.transpose()).norm() == 0.0);
}

TEST_CASE("magnetization and state helpers") {
  CHECK(magnetization(0, 4) == doctest::Approx(1.0));
  CHECK(magnetization(0b1111, 4) == doctest::Approx(-1.0));
  CHECK(magnetization(0b0101, 4) == doctest::Approx(0.0));
  CHECK(all_up_state(6) == 0);
  CHECK(all_down_state(6) == 0b111111);
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(8, 1) == 8);
  CHECK(binomial(20, 10) == 184756);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(5, 5) == 1);
}

TEST_CASE("maximum-spin overlap bounds") {
  CHECK(max_spin_overlap(0b0001, 4) == doctest::Approx(0.25));
  CHECK(max_spin_overlap(0b0011, 4) == doctest::Approx(1.0 / 6.0));
  CHECK(max_spin_overlap(0b00000001, 8) == doctest::Approx(0.125));
  CHECK(max_spin_overlap(0, 4) == doctest::Approx(1.0));
}

TEST_CASE("rotor energy matches the basis energies at the poles") {
  // theta = 0 (up) and pi (down) reproduce the diagonal target; the driver
  // term vanishes at the poles
  ProblemSpec spec{4, 2};
  const auto sched = flat_sched(0.7, 1.3);
  const Eigen::VectorXd d = target_diagonal(spec);
  for (BasisState z : {BasisState(0), BasisState(0b0001), BasisState(0b0111),
                       BasisState(0b1111)}) {
    AngleConfig cfg;
    for (int i = 0; i < 4; ++i)
      cfg.thetas.push_back((z >> i) & 1 ? pi : 0.0);
    const double e = semiclassical_energy(cfg, sched, 0.5, 2);
    CHECK(e == doctest::Approx(0.5 * 1.3 * d[z]).epsilon(1e-12));
  }
}

TEST_CASE("rotor energy is invariant under theta -> pi - theta for even p") {
  const auto sched = flat_sched(0.9, 2.1);
  Xoshiro256pp rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    AngleConfig cfg, flipped;
    for (int i = 0; i < 5; ++i) {
      const double th = rng.uniform(0.0, pi);
      cfg.thetas.push_back(th);
      flipped.thetas.push_back(pi - th);
    }
    const double e0 = semiclassical_energy(cfg, sched, 0.4, 2);
    const double e1 = semiclassical_energy(flipped, sched, 0.4, 2);
    CHECK(e0 == doctest::Approx(e1).epsilon(1e-12));
  }
}

TEST_CASE("single-angle energy difference matches a full recompute") {
  const auto sched = flat_sched(0.8, 1.7);
  const double a = sched.a(0.3), b = sched.b(0.3);
  Xoshiro256pp rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + int(rng.next() % 5);
    AngleConfig cfg;
    double ssin = 0.0, scos = 0.0;
    for (int i = 0; i < n; ++i) {
      cfg.thetas.push_back(rng.uniform(0.0, pi));
      ssin += std::sin(cfg.thetas.back());
      scos += std::cos(cfg.thetas.back());
    }
    const int k = int(rng.next() % n);
    const double fresh = rng.uniform(0.0, pi);
    AngleConfig moved = cfg;
    moved.thetas[k] = fresh;
    const double direct = semiclassical_energy(moved, sched, 0.3, 2) -
                          semiclassical_energy(cfg, sched, 0.3, 2);
    const double fast =
        delta_E_single_spin(cfg.thetas[k], fresh, ssin, scos, n, a, b, 2);
    CHECK(fast == doctest::Approx(direct).epsilon(1e-10));
  }
}

}
