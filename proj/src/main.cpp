#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "annealsim/analysis.hpp"
#include "annealsim/csvio.hpp"
#include "annealsim/errors.hpp"
#include "annealsim/model.hpp"
#include "annealsim/runner.hpp"
#include "annealsim/spectrum.hpp"
#include "annealsim/units.hpp"
#include "annealsim/version.hpp"

namespace {

using namespace annealsim;

std::vector<SweepCurve> load_reference_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<SweepCurve> curves;
  for (const auto& f : files) curves.push_back(read_curve(f.string()));
  if (curves.empty())
    throw InsufficientData("no curve files found in " + dir);
  return curves;
}

int run_command(const std::string& config_path, int threads, bool dry_run,
                const std::string& output, const std::string& schedule) {
  RunConfig cfg = parse_run_config(config_path);
  if (!output.empty()) cfg.output = output;
  if (!schedule.empty()) cfg.schedule_path = schedule;
  const RunOutcome out = execute_run(cfg, dry_run, threads);
  if (out.exit_code != 0) {
    std::fprintf(stderr, "error: %s\n", out.message.c_str());
  } else if (dry_run) {
    std::printf("%s\n", out.message.c_str());
  } else {
    std::printf("wrote %zu rows to %s\n", out.rows_written,
                cfg.output.c_str());
  }
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reverse-annealing simulation toolkit for the p-spin model"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);

  // run
  std::string cfg_path, out_override, sched_override;
  int threads = 0;
  bool dry_run = false;
  auto* run = app.add_subcommand("run", "execute a sweep from a config file");
  run->add_option("config", cfg_path, "config file path")->required();
  run->add_option("--threads", threads, "worker thread count override");
  run->add_flag("--dry-run", dry_run, "validate and print the sweep size");
  run->add_option("--output", out_override, "result CSV path override");
  run->add_option("--schedule", sched_override, "schedule CSV path override");

  // spectrum
  int sp_n = 4, sp_p = 2;
  double sp_step = 0.002;
  std::string sp_sched, sp_csv;
  auto* sp = app.add_subcommand("spectrum", "minimum-gap scan");
  sp->add_option("--n", sp_n, "qubit count")->required();
  sp->add_option("--p", sp_p, "interaction order");
  sp->add_option("--step", sp_step, "coarse grid step in s");
  sp->add_option("--schedule", sp_sched, "schedule CSV path");
  sp->add_option("--csv", sp_csv, "write the gap profile CSV here");

  // bound
  int bd_n = 4;
  std::string bd_state;
  auto* bd = app.add_subcommand("bound", "maximum-spin overlap bound");
  bd->add_option("--n", bd_n, "qubit count")->required();
  bd->add_option("--state", bd_state, "initial computational state")
      ->required();

  // calibrate
  std::string cal_grid = "default", cal_refs, cal_out = "loss_table.csv";
  std::vector<double> cal_w, cal_t, cal_eta;
  double cal_tau = 1000.0, cal_cutoff = 1.0;
  int cal_threads = 1;
  std::string cal_sched;
  auto* cal = app.add_subcommand(
      "calibrate", "grid-search bath parameters against reference curves");
  cal->add_option("--grid", cal_grid, "'default' or 'custom'");
  cal->add_option("--w", cal_w, "custom W grid, mK")->delimiter(',');
  cal->add_option("--t", cal_t, "custom T grid, mK")->delimiter(',');
  cal->add_option("--eta", cal_eta, "custom eta g^2 grid")->delimiter(',');
  cal->add_option("--refs", cal_refs, "directory of reference curve CSVs")
      ->required();
  cal->add_option("--tau", cal_tau, "anneal time, ns");
  cal->add_option("--cutoff-thz", cal_cutoff, "bath cutoff, THz");
  cal->add_option("--out", cal_out, "loss table CSV path");
  cal->add_option("--threads", cal_threads, "worker threads");
  cal->add_option("--schedule", cal_sched, "schedule CSV path");

  // optimize-sweeps
  std::string os_refs, os_variant = "tf", os_sched;
  std::vector<int> os_cands{150, 300, 450, 600};
  int os_samples = 1000, os_threads = 1;
  std::uint64_t os_seed = 1;
  double os_temp = 12.1;
  auto* osweep = app.add_subcommand(
      "optimize-sweeps", "pick the sweep count matching reference curves");
  osweep->add_option("--refs", os_refs, "directory of reference curve CSVs")
      ->required();
  osweep->add_option("--candidates", os_cands, "sweep counts to try")
      ->delimiter(',');
  osweep->add_option("--variant", os_variant, "plain or tf");
  osweep->add_option("--samples", os_samples, "walkers per point");
  osweep->add_option("--seed", os_seed, "walker seed");
  osweep->add_option("--temperature-mk", os_temp, "temperature, mK");
  osweep->add_option("--threads", os_threads, "worker threads");
  osweep->add_option("--schedule", os_sched, "schedule CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(cfg_path, threads, dry_run, out_override,
                                 sched_override);

    if (*sp) {
      const Schedule sched = resolve_schedule(sp_sched);
      const GapReport report = gap_profile(sp_n, sp_p, sched, sp_step);
      if (!sp_csv.empty()) {
        std::ofstream f(sp_csv);
        f << gap_report_csv(report);
      }
      std::printf("n=%d s_delta=%.4f gap_radns=%.6g gap_ghz=%.6g\n", report.n,
                  report.s_delta, report.delta,
                  report.delta / two_pi);
      return 0;
    }

    if (*bd) {
      const BasisState z = parse_basis_state(bd_state, bd_n);
      std::printf("%.10g\n", max_spin_overlap(z, bd_n));
      return 0;
    }

    if (*cal) {
      CalibrationGrid grid;
      if (cal_grid == "default") {
        grid = CalibrationGrid::survey_default();
      } else {
        grid.w_mk = cal_w;
        grid.t_mk = cal_t;
        grid.eta_g2 = cal_eta;
      }
      const Schedule sched = resolve_schedule(cal_sched);
      const auto refs = load_reference_dir(cal_refs);
      const auto result = calibrate_ptre(refs, grid, sched, cal_tau,
                                         1000.0 * cal_cutoff, cal_out,
                                         cal_threads);
      std::printf(
          "best: W=%.6g mK  T=%.6g mK  eta_g2=%.6g  loss=%.6g  (%zu cells, "
          "table %s)\n",
          result.best.w_mk, result.best.t_mk, result.best.eta_g2,
          result.best.loss, result.table.size(), cal_out.c_str());
      return 0;
    }

    if (*osweep) {
      const Schedule sched = resolve_schedule(os_sched);
      const auto refs = load_reference_dir(os_refs);
      SvmcConfig base;
      base.variant = (os_variant == "plain" || os_variant == "svmc")
                         ? SvmcVariant::plain
                         : SvmcVariant::tf;
      base.samples = os_samples;
      base.seed = os_seed;
      base.beta = 1.0 / temperature_to_rate(os_temp);
      const auto result =
          optimize_sweeps(refs, os_cands, sched, base, os_threads);
      std::printf("best sweeps_tau = %d\n", result.best);
      for (const auto& [cand, loss] : result.losses)
        std::printf("  %6d  loss=%.6g\n", cand, loss);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
