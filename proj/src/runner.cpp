#include "annealsim/runner.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "annealsim/ame.hpp"
#include "annealsim/closed.hpp"
#include "annealsim/errors.hpp"
#include "annealsim/ptre.hpp"
#include "annealsim/svmc.hpp"
#include "annealsim/units.hpp"
#include "annealsim/version.hpp"

namespace annealsim {

namespace {

std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_path_for(const std::string& output) {
  std::string base = output;
  if (base.size() > 4 && base.compare(base.size() - 4, 4, ".csv") == 0)
    base.resize(base.size() - 4);
  return base + ".manifest.json";
}

AnnealProtocol protocol_for(const RunConfig& cfg, const SweepPoint& pt) {
  AnnealProtocol proto;
  proto.tau = pt.tau_ns;
  proto.s_inv = pt.s_inv;
  proto.t_pause = pt.t_pause_ns;
  proto.cycles = pt.cycles;
  proto.mode = (cfg.mode == "forward") ? AnnealProtocol::Mode::forward
                                       : AnnealProtocol::Mode::reverse;
  return proto;
}

nlohmann::json config_echo(const RunConfig& c) {
  nlohmann::json j;
  j["run"] = {{"model", c.model},     {"schedule", c.schedule_path},
              {"output", c.output},   {"coupling", c.coupling},
              {"threads", c.threads}};
  j["problem"] = {{"n", c.n}, {"p", c.p}, {"initial", c.initial}};
  j["protocol"] = {{"mode", c.mode},
                   {"s_inv", c.s_inv},
                   {"tau_ns", c.tau_ns},
                   {"t_pause_ns", c.t_pause_ns},
                   {"cycles", c.cycles}};
  j["truncation"] = {{"n_levels", c.n_levels},
                     {"table_nodes", c.table_nodes}};
  j["closed"] = {{"max_sector_only", c.closed_max_sector}};
  j["bath"] = {{"eta_g2", c.bath_eta_g2},
               {"omega_c_ghz", c.bath_omega_c_ghz},
               {"temperature_mk", c.bath_temperature_mk},
               {"secular_window", c.bath_secular_window},
               {"lamb_shift", c.bath_lamb_shift}};
  j["ptre"] = {{"eta_g2", c.ptre_eta_g2},
               {"temperature_mk", c.ptre_temperature_mk},
               {"w_mk", c.ptre_w_mk},
               {"cutoff_thz", c.ptre_cutoff_thz}};
  j["svmc"] = {{"variant", c.svmc_variant},
               {"sweeps_tau", c.svmc_sweeps_tau},
               {"samples", c.svmc_samples},
               {"seed", c.svmc_seeds},
               {"temperature_mk", c.svmc_temperature_mk}};
  return j;
}

}  // namespace

std::vector<SweepPoint> expand_sweep(const RunConfig& cfg) {
  std::vector<double> s_list = cfg.s_inv;
  if (cfg.mode == "forward") s_list = {1.0};
  std::vector<std::uint64_t> seeds{0};
  if (cfg.model == "svmc") seeds = cfg.svmc_seeds;
  std::vector<SweepPoint> points;
  points.reserve(s_list.size() * cfg.tau_ns.size() * cfg.t_pause_ns.size() *
                 cfg.cycles.size() * seeds.size());
  for (double s : s_list)
    for (double tau : cfg.tau_ns)
      for (double tp : cfg.t_pause_ns)
        for (int r : cfg.cycles)
          for (std::uint64_t seed : seeds)
            points.push_back({s, tau, tp, r, seed});
  return points;
}

Schedule resolve_schedule(const std::string& path) {
  if (!path.empty()) return load_schedule_file(path);
  return load_schedule_file(std::string(ANNEALSIM_DATA_DIR) +
                            "/dw2000q_schedule.csv");
}

PointSolver::PointSolver(const RunConfig& cfg, const Schedule& sched)
    : cfg_(cfg), sched_(sched) {}

PointSolver::~PointSolver() = default;

ResultRow PointSolver::solve(const SweepPoint& point) {
  const ProblemSpec spec{cfg_.n, cfg_.p};
  const BasisState z0 = cfg_.initial_state();
  const AnnealProtocol proto = protocol_for(cfg_, point);

  ResultRow row;
  row.model = cfg_.model;
  row.n = cfg_.n;
  row.s_inv = point.s_inv;
  row.tau_ns = point.tau_ns;
  row.t_pause_ns = point.t_pause_ns;
  row.r = point.cycles;
  row.seed = point.seed;

  if (cfg_.model == "closed") {
    if (!closed_) {
      ClosedConfig c;
      c.max_sector_only = cfg_.closed_max_sector;
      c.table_nodes = cfg_.table_nodes;
      closed_ = std::make_unique<ClosedEngine>(spec, sched_, c);
    }
    const auto res = closed_->run(z0, proto);
    row.p_up = res.p_up;
    row.p_down = res.p_down;
  } else if (cfg_.model == "ame") {
    if (!ame_) {
      AmeConfig a;
      a.bath.eta_g2 = cfg_.bath_eta_g2;
      a.bath.omega_c = ghz_to_radns(cfg_.bath_omega_c_ghz);
      a.bath.beta = 1.0 / temperature_to_rate(cfg_.bath_temperature_mk);
      a.coupling = (cfg_.coupling == "collective") ? BathCoupling::collective
                                                   : BathCoupling::independent;
      a.secular_window = cfg_.bath_secular_window;
      a.lamb_shift = cfg_.bath_lamb_shift;
      a.n_levels = cfg_.n_levels;
      a.table_nodes = cfg_.table_nodes;
      ame_ = std::make_unique<AmeEngine>(spec, sched_, a);
    }
    const auto res = ame_->run(z0, proto);
    row.p_up = res.p_up;
    row.p_down = res.p_down;
  } else if (cfg_.model == "ptre") {
    if (!ptre_) {
      PtreConfig p;
      p.bath.eta_g2 = cfg_.ptre_eta_g2;
      p.bath.omega_c = ghz_to_radns(1000.0 * cfg_.ptre_cutoff_thz);
      p.bath.temperature = temperature_to_rate(cfg_.ptre_temperature_mk);
      p.bath.width = temperature_to_rate(cfg_.ptre_w_mk);
      ptre_ = std::make_unique<PtreEngine>(spec, sched_, p);
    }
    const auto res = ptre_->run(z0, proto);
    row.p_up = res.p_up;
    row.p_down = res.p_down;
  } else if (cfg_.model == "svmc") {
    SvmcConfig s;
    s.variant = (cfg_.svmc_variant == "plain" || cfg_.svmc_variant == "svmc")
                    ? SvmcVariant::plain
                    : SvmcVariant::tf;
    s.sweeps_tau = cfg_.svmc_sweeps_tau;
    s.beta = 1.0 / temperature_to_rate(cfg_.svmc_temperature_mk);
    s.samples = cfg_.svmc_samples;
    s.seed = point.seed;
    const auto finals = run_svmc(spec, sched_, proto, z0, s);
    const auto st = partial_stats(finals, cfg_.n);
    row.p_up = st.p_up;
    row.p_down = st.p_down;
    row.std_err = st.std_err;
  } else {
    throw ConfigError("unknown model: " + cfg_.model);
  }
  row.total = row.p_up + row.p_down;
  return row;
}

RunOutcome execute_run(const RunConfig& cfg_in, bool dry_run,
                       int threads_override) {
  RunConfig cfg = cfg_in;
  if (threads_override > 0) cfg.threads = threads_override;
  try {
    cfg.validate();
  } catch (const AnnealError& e) {
    return {2, 0, e.what()};
  }

  const auto points = expand_sweep(cfg);
  if (dry_run)
    return {0, 0, "sweep points: " + std::to_string(points.size())};

  const std::string started = iso_now();
  const auto t0 = std::chrono::steady_clock::now();

  std::unique_ptr<Schedule> sched;
  std::unique_ptr<ResultWriter> writer;
  try {
    sched = std::make_unique<Schedule>(resolve_schedule(cfg.schedule_path));
    writer = std::make_unique<ResultWriter>(cfg.output);
  } catch (const std::exception& e) {
    return {2, 0, e.what()};
  }

  const std::size_t count = points.size();
  std::vector<ResultRow> rows(count);
  std::vector<double> wall_ms(count, 0.0);
  std::vector<char> done(count, 0);
  std::string error_text;
  std::size_t error_at = count;  // first failed slot
  std::mutex m;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto worker = [&] {
    PointSolver solver(cfg, *sched);
    for (;;) {
      if (stop.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        const auto w0 = std::chrono::steady_clock::now();
        ResultRow row = solver.solve(points[i]);
        const auto w1 = std::chrono::steady_clock::now();
        std::lock_guard<std::mutex> lock(m);
        rows[i] = std::move(row);
        wall_ms[i] =
            std::chrono::duration<double, std::milli>(w1 - w0).count();
        done[i] = 1;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(m);
        if (i < error_at) {
          error_at = i;
          error_text = e.what();
        }
        stop.store(true);
      }
      cv.notify_all();
    }
  };

  const int nt = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), count));
  std::size_t cursor = 0;
  RunOutcome out;

  if (nt <= 1) {
    PointSolver solver(cfg, *sched);
    for (std::size_t i = 0; i < count; ++i) {
      try {
        const auto w0 = std::chrono::steady_clock::now();
        rows[i] = solver.solve(points[i]);
        wall_ms[i] = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - w0)
                         .count();
      } catch (const std::exception& e) {
        error_at = i;
        error_text = e.what();
        break;
      }
      writer->write(rows[i]);
      ++cursor;
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    // single writer: flush rows in grid order as they complete
    {
      std::unique_lock<std::mutex> lock(m);
      while (cursor < count) {
        cv.wait(lock, [&] {
          return done[cursor] || error_at <= cursor || stop.load();
        });
        if (error_at <= cursor) break;
        if (!done[cursor]) {
          if (stop.load()) break;
          continue;
        }
        const ResultRow row = rows[cursor];
        lock.unlock();
        writer->write(row);
        lock.lock();
        ++cursor;
      }
    }
    for (auto& th : pool) th.join();
    // workers that finished later slots before a stop: flush the ordered
    // prefix that is actually complete
    while (cursor < count && cursor < error_at && done[cursor]) {
      writer->write(rows[cursor]);
      ++cursor;
    }
  }

  out.rows_written = cursor;
  const double total_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  nlohmann::json manifest;
  manifest["tool"] = "annealsim";
  manifest["version"] = version;
  manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION);
  manifest["schedule"] = sched->name();
  manifest["config"] = config_echo(cfg);
  manifest["rows"] = count;
  manifest["rows_written"] = out.rows_written;
  manifest["threads"] = nt;
  manifest["started"] = started;
  manifest["finished"] = iso_now();
  manifest["total_s"] = total_s;
  manifest["wall_ms"] = wall_ms;
  if (error_at < count) manifest["error"] = error_text;
  std::ofstream mf(manifest_path_for(cfg.output));
  if (mf) mf << manifest.dump(2) << '\n';

  if (error_at < count) {
    out.exit_code = 3;
    out.message = error_text;
  }
  return out;
}

}  // namespace annealsim
