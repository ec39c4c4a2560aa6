#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "annealsim/analysis.hpp"
#include "annealsim/ptre.hpp"
#include "annealsim/rng.hpp"

using namespace annealsim;

namespace {

const Schedule& sched() {
  static Schedule s =
      load_schedule_file(std::string(ANNEALSIM_DATA_DIR) + "/dw2000q_schedule.csv");
  return s;
}

SweepCurve make_curve(std::vector<double> grid, std::vector<double> values) {
  SweepCurve c;
  c.grid = std::move(grid);
  c.values = std::move(values);
  c.meta.model = "test";
  c.meta.n_qubits = 4;
  c.meta.initial = 0b0001;
  return c;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("excited bins partition the population") {
  Eigen::VectorXd pop(16);
  Xoshiro256pp rng(31);
  for (int i = 0; i < 16; ++i) pop[i] = rng.uniform(0.0, 1.0);
  pop /= pop.sum();

  // bins (level, branch) for level < n/2 plus the self-conjugate half-filled
  // bin tile the basis exactly once
  double covered = 0.0;
  for (int level = 0; level <= 2; ++level) {
    const auto bin = excited_bin(pop, 4, level);
    covered += bin.up;
    if (level < 2) covered += bin.down;
  }
  CHECK(covered == doctest::Approx(1.0).epsilon(1e-12));

  const auto ground = excited_bin(pop, 4, 0);
  CHECK(ground.up == doctest::Approx(pop[0]).epsilon(1e-14));
  CHECK(ground.down == doctest::Approx(pop[15]).epsilon(1e-14));
}

TEST_CASE("bit flip exchanges the branches") {
  Eigen::VectorXd pop = Eigen::VectorXd::Zero(16);
  pop[0b0001] = 0.7;
  pop[0b1110] = 0.3;
  const auto bin = excited_bin(pop, 4, 1);
  CHECK(bin.up == doctest::Approx(0.7));
  CHECK(bin.down == doctest::Approx(0.3));

  Eigen::VectorXd flipped = Eigen::VectorXd::Zero(16);
  for (int z = 0; z < 16; ++z) flipped[z ^ 0b1111] = pop[z];
  const auto swapped = excited_bin(flipped, 4, 1);
  CHECK(swapped.up == doctest::Approx(bin.down));
  CHECK(swapped.down == doctest::Approx(bin.up));
}

TEST_CASE("sample bins match population bins") {
  std::vector<BasisState> finals = {0b0001, 0b0010, 0b1110, 0b0000, 0b0001};
  const auto bin = excited_bin(finals, 4, 1);
  CHECK(bin.up == doctest::Approx(0.6));
  CHECK(bin.down == doctest::Approx(0.2));
}

TEST_CASE("l2 distance is a metric on matched grids") {
  Xoshiro256pp rng(8);
  std::vector<double> grid;
  for (int i = 0; i < 9; ++i) grid.push_back(0.1 * (i + 1));
  auto rand_curve = [&] {
    std::vector<double> v;
    for (int i = 0; i < 9; ++i) v.push_back(rng.uniform(0.0, 1.0));
    return make_curve(grid, v);
  };
  const auto a = rand_curve(), b = rand_curve(), c = rand_curve();
  CHECK(l2_distance(a, a) == 0.0);
  CHECK(l2_distance(a, b) == doctest::Approx(l2_distance(b, a)));
  CHECK(l2_distance(a, c) <= l2_distance(a, b) + l2_distance(b, c) + 1e-12);
  CHECK(l2_distance(a, b) > 0.0);

  const auto shifted = make_curve({0.1, 0.2}, {0.5, 0.5});
  CHECK_THROWS_AS(l2_distance(a, shifted), AlignmentError);
}

TEST_CASE("curve validation rejects malformed data") {
  auto c = make_curve({0.2, 0.1}, {0.5, 0.5});
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = make_curve({0.1, 0.2}, {0.5});
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = make_curve({0.1, 0.2}, {0.5, 1.5});
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = make_curve({0.1, 0.2}, {0.5, 0.9});
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("grid validation needs every axis") {
  CalibrationGrid g;
  g.w_mk = {8.0};
  g.t_mk = {25.0};
  CHECK_THROWS_AS(g.validate(), InsufficientData);
  g.eta_g2 = {2.5e-3};
  CHECK_NOTHROW(g.validate());

  const auto full = CalibrationGrid::survey_default();
  CHECK(full.w_mk.size() == 18);
  CHECK(full.t_mk.size() == 25);
  CHECK(full.eta_g2.size() == 10);
}

TEST_CASE("calibration recovers a planted cell") {
  // make references with the engine itself at one grid cell; the search
  // must find that cell with zero loss
  const double tau = 1000.0;
  std::vector<double> grid = {0.3, 0.45, 0.6, 0.75};

  PtreConfig pcfg;
  pcfg.bath.width = temperature_to_rate(10.0);
  pcfg.bath.temperature = temperature_to_rate(22.0);
  pcfg.bath.eta_g2 = 2.5e-3;
  PtreEngine truth(ProblemSpec{4, 2}, sched(), pcfg);
  SweepCurve ref;
  ref.grid = grid;
  ref.meta.n_qubits = 4;
  ref.meta.initial = 0b0001;
  ref.meta.level = 0;
  ref.meta.up_branch = true;
  for (double s_inv : grid) {
    AnnealProtocol proto;
    proto.tau = tau;
    proto.s_inv = s_inv;
    const auto res = truth.run(0b0001, proto);
    ref.values.push_back(res.p_up);
  }

  CalibrationGrid search;
  search.w_mk = {8.0, 10.0};
  search.t_mk = {22.0, 25.0};
  search.eta_g2 = {2.5e-3};
  const auto result = calibrate_ptre({ref}, search, sched(), tau, 1000.0);
  CHECK(result.best.w_mk == 10.0);
  CHECK(result.best.t_mk == 22.0);
  CHECK(result.best.loss < 1e-12);
  CHECK(result.table.size() == 4);
}

TEST_CASE("calibration resumes from a loss table") {
  const std::string path = "calib_resume_test.csv";
  std::remove(path.c_str());

  const double tau = 1000.0;
  SweepCurve ref = make_curve({0.4, 0.6}, {0.5, 0.2});
  ref.meta.level = 0;

  CalibrationGrid search;
  search.w_mk = {8.0};
  search.t_mk = {22.0, 25.0};
  search.eta_g2 = {2.5e-3};

  const auto first = calibrate_ptre({ref}, search, sched(), tau, 1000.0, path);
  // the table file now holds both cells; a fake entry proves rows are reused
  // rather than recomputed
  std::ofstream append(path, std::ios::app);
  append << "8,99,0.0025,123.5\n";
  append.close();
  search.t_mk = {22.0, 25.0, 99.0};
  const auto second = calibrate_ptre({ref}, search, sched(), tau, 1000.0, path);
  REQUIRE(second.table.size() == 3);
  CHECK(second.table[0].loss == doctest::Approx(first.table[0].loss));
  CHECK(second.table[1].loss == doctest::Approx(first.table[1].loss));
  CHECK(second.table[2].loss == doctest::Approx(123.5));
  std::remove(path.c_str());
}

TEST_CASE("sweep optimization recovers a planted count") {
  SvmcConfig base;
  base.variant = SvmcVariant::tf;
  base.samples = 400;
  base.seed = 11;

  std::vector<double> grid = {0.35, 0.5, 0.65};
  SvmcConfig truth = base;
  truth.sweeps_tau = 300;
  SweepCurve ref;
  ref.grid = grid;
  ref.meta.n_qubits = 4;
  ref.meta.initial = 0b0001;
  ref.meta.level = 0;
  for (double s_inv : grid) {
    AnnealProtocol proto;
    proto.tau = 1000.0;
    proto.s_inv = s_inv;
    const auto finals =
        run_svmc(ProblemSpec{4, 2}, sched(), proto, 0b0001, truth);
    ref.values.push_back(excited_bin(finals, 4, 0).up);
  }

  const auto result =
      optimize_sweeps({ref}, {150, 300, 600}, sched(), base);
  CHECK(result.best == 300);
  REQUIRE(result.losses.size() == 3);
  for (const auto& [cand, loss] : result.losses)
    if (cand == 300) CHECK(loss < 1e-12);
}

TEST_CASE("bound check composes the overlap bound") {
  const auto ok = check_bound(0.2, 0b0001, 4);
  CHECK(ok.pass);
  CHECK(ok.bound == doctest::Approx(0.25));
  CHECK(ok.margin == doctest::Approx(0.05));
  const auto bad = check_bound(0.3, 0b0001, 4);
  CHECK_FALSE(bad.pass);
  const auto half = check_bound(0.16, 0b0011, 4);
  CHECK(half.bound == doctest::Approx(1.0 / 6.0));
  CHECK(half.pass);
}

}
