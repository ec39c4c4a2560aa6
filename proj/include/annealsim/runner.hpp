#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "annealsim/csvio.hpp"
#include "annealsim/runconfig.hpp"
#include "annealsim/schedule.hpp"

// Sweep execution: expand the cartesian protocol grid, solve each point on
// a worker pool, and stream rows to the result CSV in grid order through a
// single writer. Exit status follows the batch contract: 0 success, 2
// invalid configuration, 3 solver failure (rows finished before the failure
// are already on disk).

namespace annealsim {

struct SweepPoint {
  double s_inv = 0.5;
  double tau_ns = 1.0;
  double t_pause_ns = 0.0;
  int cycles = 1;
  std::uint64_t seed = 0;  // meaningful for the Monte Carlo model only
};

// grid order: s_inv outermost, then tau, t_pause, cycles, seed
std::vector<SweepPoint> expand_sweep(const RunConfig& cfg);

// resolve the schedule: explicit path if given, else the bundled table
Schedule resolve_schedule(const std::string& path);

struct RunOutcome {
  int exit_code = 0;
  std::size_t rows_written = 0;
  std::string message;
};

// full batch run; writes cfg.output and a JSON manifest next to it.
// threads_override > 0 replaces cfg.threads; dry_run only reports the size.
RunOutcome execute_run(const RunConfig& cfg, bool dry_run = false,
                       int threads_override = 0);

class ClosedEngine;
class AmeEngine;
class PtreEngine;

// Per-worker dispatcher. Engines (and their eigenframe tables) are built on
// first use and reused across the worker's points; svmc points honor
// point.seed, the deterministic solvers report seed 0.
class PointSolver {
 public:
  PointSolver(const RunConfig& cfg, const Schedule& sched);
  ~PointSolver();
  ResultRow solve(const SweepPoint& point);

 private:
  const RunConfig& cfg_;
  const Schedule& sched_;
  std::unique_ptr<ClosedEngine> closed_;
  std::unique_ptr<AmeEngine> ame_;
  std::unique_ptr<PtreEngine> ptre_;
};

}  // namespace annealsim
