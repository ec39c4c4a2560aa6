#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "annealsim/model.hpp"
#include "annealsim/schedule.hpp"
#include "annealsim/svmc.hpp"

// Cross-model analytics: excited-level binning of outcomes, l2 distance
// between sweep curves, grid-search calibration of the classical-path
// solver's bath parameters against reference curves, and the matching sweep
// count search for the Monte Carlo dynamics. Curves are keyed by an s_inv
// grid; an observable is an excited-level bin plus a branch.

namespace annealsim {

struct CurveMeta {
  std::string model;          // producer tag, free form
  int n_qubits = 0;
  BasisState initial = 0;
  int level = 0;              // excited-bin index, 0 = the pole states
  bool up_branch = true;
  bool approx = false;        // digitized-by-eye fixture, excluded from hard checks
  std::string params;         // free-form annotation
};

struct SweepCurve {
  std::vector<double> grid;    // s_inv values, strictly increasing
  std::vector<double> values;  // populations in [0, 1]
  std::vector<double> errors;  // empty, or one per point
  CurveMeta meta;

  void validate() const;  // DomainError on shape or range violations
};

struct BinProbability {
  double up = 0.0;    // weight on states with `level` spins down
  double down = 0.0;  // weight on states with `level` spins up
};

// sum basis populations over one excited level; `populations` indexes the
// full 2^n computational basis
BinProbability excited_bin(const Eigen::VectorXd& populations, int n,
                           int level);

// sample version: fraction of finals landing in each branch of the level
BinProbability excited_bin(const std::vector<BasisState>& finals, int n,
                           int level);

// sqrt of the summed squared pointwise difference; grids must agree
double l2_distance(const SweepCurve& a, const SweepCurve& b);

// sum of pairwise distances over matched curve lists
double total_l2(const std::vector<SweepCurve>& a,
                const std::vector<SweepCurve>& b);

struct CalibrationGrid {
  std::vector<double> w_mk;     // low-frequency Gaussian width
  std::vector<double> t_mk;     // temperature
  std::vector<double> eta_g2;   // Ohmic coupling
  void validate() const;        // InsufficientData if any axis is empty

  // the standard search box: T 6..30 mK step 1, W 6..40 mK step 2, ten
  // couplings bracketing the usual best-fit region
  static CalibrationGrid survey_default();
};

struct CalibrationCell {
  double w_mk = 0.0;
  double t_mk = 0.0;
  double eta_g2 = 0.0;
  double loss = 0.0;
};

struct CalibrationResult {
  CalibrationCell best;
  std::vector<CalibrationCell> table;  // one row per grid cell, grid order
};

// Exhaustive grid search: for every cell, rerun the classical-path solver
// over each reference curve's grid (tau and cutoff fixed) and sum the l2
// losses. Ties break toward the first cell in (w, t, eta) iteration order.
// If loss_table_path is non-empty, finished cells are appended there and
// matching rows are reused on rerun.
CalibrationResult calibrate_ptre(const std::vector<SweepCurve>& references,
                                 const CalibrationGrid& grid,
                                 const Schedule& sched, double tau_ns,
                                 double cutoff_ghz,
                                 const std::string& loss_table_path = {},
                                 int n_threads = 1);

struct SweepOptimization {
  int best = 0;
  std::vector<std::pair<int, double>> losses;  // candidate -> summed loss
};

// pick the sweep count whose Monte Carlo curves best match the references;
// base supplies variant, walker count, temperature and seed
SweepOptimization optimize_sweeps(const std::vector<SweepCurve>& references,
                                  const std::vector<int>& candidates,
                                  const Schedule& sched, const SvmcConfig& base,
                                  int n_threads = 1);

struct BoundCheck {
  bool pass = false;
  double bound = 0.0;
  double total = 0.0;
  double margin = 0.0;  // bound - total
};

// total success against the maximum-spin overlap bound of the initial state
BoundCheck check_bound(double total, BasisState initial, int n,
                       double tol = 1e-9);

}  // namespace annealsim
