#include "annealsim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "annealsim/errors.hpp"
#include "annealsim/ptre.hpp"
#include "annealsim/units.hpp"

namespace annealsim {

namespace {

void run_indexed(std::size_t count, int n_threads,
                 const std::function<void(std::size_t)>& fn) {
  if (n_threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int nt = std::min<std::size_t>(n_threads, count);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

// references sharing (n, initial) are evaluated from one solver run per
// grid point, so group them and insist on a common grid
struct CurveGroup {
  int n_qubits = 0;
  BasisState initial = 0;
  const std::vector<double>* grid = nullptr;
  std::vector<std::size_t> members;
};

std::vector<CurveGroup> group_references(
    const std::vector<SweepCurve>& references) {
  if (references.empty())
    throw InsufficientData("no reference curves supplied");
  std::vector<CurveGroup> groups;
  for (std::size_t i = 0; i < references.size(); ++i) {
    const auto& c = references[i];
    c.validate();
    if (c.meta.n_qubits <= 0)
      throw DomainError("reference curve is missing its qubit count");
    CurveGroup* hit = nullptr;
    for (auto& g : groups)
      if (g.n_qubits == c.meta.n_qubits && g.initial == c.meta.initial)
        hit = &g;
    if (hit == nullptr) {
      groups.push_back({c.meta.n_qubits, c.meta.initial, &c.grid, {i}});
    } else {
      if (hit->grid->size() != c.grid.size() ||
          !std::equal(hit->grid->begin(), hit->grid->end(), c.grid.begin(),
                      [](double x, double y) { return std::abs(x - y) < 1e-12; }))
        throw AlignmentError(
            "reference curves for one initial state use different grids");
      hit->members.push_back(i);
    }
  }
  return groups;
}

double branch_value(const BinProbability& bin, bool up) {
  return up ? bin.up : bin.down;
}

std::string cell_key(double w, double t, double eta) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g", w, t, eta);
  return buf;
}

}  // namespace

void SweepCurve::validate() const {
  if (grid.empty()) throw DomainError("sweep curve has no grid points");
  if (values.size() != grid.size())
    throw DomainError("sweep curve grid and values differ in length");
  if (!errors.empty() && errors.size() != grid.size())
    throw DomainError("sweep curve error column has the wrong length");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (grid[k] <= grid[k - 1])
      throw DomainError("sweep curve grid must increase strictly");
  for (double v : values)
    if (!(v > -1e-9 && v < 1.0 + 1e-9))
      throw DomainError("sweep curve value outside [0, 1]");
}

BinProbability excited_bin(const Eigen::VectorXd& populations, int n,
                           int level) {
  if (n < 1 || n > 30) throw DomainError("qubit count out of range");
  if (populations.size() != (1ll << n))
    throw DomainError("population vector does not match the basis size");
  if (level < 0 || 2 * level > n)
    throw DomainError("excited level must lie in [0, n/2]");
  BinProbability bin;
  for (std::int64_t z = 0; z < populations.size(); ++z) {
    const int down = std::popcount(static_cast<std::uint64_t>(z));
    if (down == level) bin.up += populations[z];
    if (n - down == level) bin.down += populations[z];
  }
  return bin;
}

BinProbability excited_bin(const std::vector<BasisState>& finals, int n,
                           int level) {
  if (n < 1 || n > 62) throw DomainError("qubit count out of range");
  if (level < 0 || 2 * level > n)
    throw DomainError("excited level must lie in [0, n/2]");
  if (finals.empty()) return {};
  BinProbability bin;
  for (BasisState z : finals) {
    const int down = std::popcount(z);
    if (down == level) bin.up += 1.0;
    if (n - down == level) bin.down += 1.0;
  }
  bin.up /= static_cast<double>(finals.size());
  bin.down /= static_cast<double>(finals.size());
  return bin;
}

double l2_distance(const SweepCurve& a, const SweepCurve& b) {
  a.validate();
  b.validate();
  if (a.grid.size() != b.grid.size())
    throw AlignmentError("curves have different grid sizes");
  double ss = 0.0;
  for (std::size_t k = 0; k < a.grid.size(); ++k) {
    if (std::abs(a.grid[k] - b.grid[k]) > 1e-12)
      throw AlignmentError("curve grids disagree");
    const double d = a.values[k] - b.values[k];
    ss += d * d;
  }
  return std::sqrt(ss);
}

double total_l2(const std::vector<SweepCurve>& a,
                const std::vector<SweepCurve>& b) {
  if (a.size() != b.size())
    throw AlignmentError("curve lists have different lengths");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += l2_distance(a[i], b[i]);
  return sum;
}

void CalibrationGrid::validate() const {
  if (w_mk.empty() || t_mk.empty() || eta_g2.empty())
    throw InsufficientData("calibration grid has an empty axis");
}

CalibrationGrid CalibrationGrid::survey_default() {
  CalibrationGrid g;
  for (int w = 6; w <= 40; w += 2) g.w_mk.push_back(w);
  for (int t = 6; t <= 30; ++t) g.t_mk.push_back(t);
  g.eta_g2 = {5e-4, 1e-3, 1.5e-3, 2e-3, 2.5e-3,
              3e-3, 4e-3, 5e-3,   7.5e-3, 1e-2};
  return g;
}

CalibrationResult calibrate_ptre(const std::vector<SweepCurve>& references,
                                 const CalibrationGrid& grid,
                                 const Schedule& sched, double tau_ns,
                                 double cutoff_ghz,
                                 const std::string& loss_table_path,
                                 int n_threads) {
  grid.validate();
  if (tau_ns <= 0.0) throw DomainError("anneal time must be positive");
  const auto groups = group_references(references);

  // resume: reuse any cells already present in the loss table
  std::map<std::string, double> done;
  if (!loss_table_path.empty()) {
    std::ifstream in(loss_table_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line.rfind("w_mk", 0) == 0) continue;
      const auto last = line.find_last_of(',');
      if (last == std::string::npos) continue;
      done[line.substr(0, last)] = std::stod(line.substr(last + 1));
    }
  }

  std::vector<CalibrationCell> cells;
  for (double w : grid.w_mk)
    for (double t : grid.t_mk)
      for (double eta : grid.eta_g2) cells.push_back({w, t, eta, 0.0});

  std::mutex io_mutex;
  std::ofstream out;
  if (!loss_table_path.empty()) {
    const bool fresh = done.empty();
    out.open(loss_table_path, std::ios::app);
    if (!out) throw FormatError("cannot open loss table for writing");
    if (fresh) out << "w_mk,t_mk,eta_g2,loss\n" << std::flush;
  }

  run_indexed(cells.size(), n_threads, [&](std::size_t ci) {
    auto& cell = cells[ci];
    const auto key = cell_key(cell.w_mk, cell.t_mk, cell.eta_g2);
    if (auto it = done.find(key); it != done.end()) {
      cell.loss = it->second;
      return;
    }
    PtreConfig pcfg;
    pcfg.bath.eta_g2 = cell.eta_g2;
    pcfg.bath.omega_c = ghz_to_radns(cutoff_ghz);
    pcfg.bath.temperature = temperature_to_rate(cell.t_mk);
    pcfg.bath.width = temperature_to_rate(cell.w_mk);
    double loss = 0.0;
    for (const auto& g : groups) {
      const ProblemSpec spec{g.n_qubits, 2};
      PtreEngine engine(spec, sched, pcfg);
      std::vector<Eigen::VectorXd> pops;
      pops.reserve(g.grid->size());
      for (double s_inv : *g.grid) {
        AnnealProtocol proto;
        proto.tau = tau_ns;
        proto.s_inv = s_inv;
        pops.push_back(engine.run(g.initial, proto).populations);
      }
      for (std::size_t mi : g.members) {
        const auto& ref = references[mi];
        double ss = 0.0;
        for (std::size_t k = 0; k < pops.size(); ++k) {
          const double sim = branch_value(
              excited_bin(pops[k], g.n_qubits, ref.meta.level),
              ref.meta.up_branch);
          const double d = sim - ref.values[k];
          ss += d * d;
        }
        loss += std::sqrt(ss);
      }
    }
    cell.loss = loss;
    if (out.is_open()) {
      std::lock_guard<std::mutex> lock(io_mutex);
      char buf[128];
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", cell.w_mk,
                    cell.t_mk, cell.eta_g2, cell.loss);
      out << buf << std::flush;
    }
  });

  CalibrationResult result;
  result.table = std::move(cells);
  result.best = result.table.front();
  for (const auto& c : result.table)
    if (c.loss < result.best.loss) result.best = c;
  return result;
}

SweepOptimization optimize_sweeps(const std::vector<SweepCurve>& references,
                                  const std::vector<int>& candidates,
                                  const Schedule& sched, const SvmcConfig& base,
                                  int n_threads) {
  if (candidates.empty()) throw InsufficientData("no sweep candidates");
  const auto groups = group_references(references);

  std::vector<double> losses(candidates.size(), 0.0);
  run_indexed(candidates.size(), n_threads, [&](std::size_t idx) {
    SvmcConfig cfg = base;
    cfg.sweeps_tau = candidates[idx];
    if (cfg.sweeps_tau <= 0)
      throw DomainError("sweep candidates must be positive");
    double loss = 0.0;
    for (const auto& g : groups) {
      const ProblemSpec spec{g.n_qubits, 2};
      std::vector<std::vector<BasisState>> finals;
      finals.reserve(g.grid->size());
      for (double s_inv : *g.grid) {
        AnnealProtocol proto;
        proto.tau = 1000.0;
        proto.s_inv = s_inv;
        finals.push_back(run_svmc(spec, sched, proto, g.initial, cfg));
      }
      for (std::size_t mi : g.members) {
        const auto& ref = references[mi];
        double ss = 0.0;
        for (std::size_t k = 0; k < finals.size(); ++k) {
          const double sim = branch_value(
              excited_bin(finals[k], g.n_qubits, ref.meta.level),
              ref.meta.up_branch);
          const double d = sim - ref.values[k];
          ss += d * d;
        }
        loss += std::sqrt(ss);
      }
    }
    losses[idx] = loss;
  });

  SweepOptimization opt;
  opt.losses.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    opt.losses.emplace_back(candidates[i], losses[i]);
  opt.best = candidates.front();
  double best_loss = losses.front();
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (losses[i] < best_loss) {
      best_loss = losses[i];
      opt.best = candidates[i];
    }
  return opt;
}

BoundCheck check_bound(double total, BasisState initial, int n, double tol) {
  BoundCheck bc;
  bc.bound = max_spin_overlap(initial, n);
  bc.total = total;
  bc.margin = bc.bound - total;
  bc.pass = total <= bc.bound + tol;
  return bc;
}

}  // namespace annealsim
