#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "annealsim/model.hpp"

// Batch run configuration. The file format is a TOML-style subset: [section]
// headers, key = value lines, '#' comments, values being strings, booleans,
// numbers, number arrays, or "start:step:stop" range strings for the
// protocol sweep lists. Unknown keys are rejected so typos fail loudly.

namespace annealsim {

struct RunConfig {
  // [run]
  std::string model = "ptre";  // closed | ame | ptre | svmc
  std::string schedule_path;   // empty -> bundled default table
  std::string output = "results.csv";
  std::string coupling = "independent";  // ame: independent | collective
  int threads = 1;

  // [problem]
  int n = 4;
  int p = 2;
  std::string initial = "0b0001";

  // [protocol]
  std::string mode = "reverse";  // reverse | forward
  std::vector<double> s_inv;
  std::vector<double> tau_ns;
  std::vector<double> t_pause_ns{0.0};
  std::vector<int> cycles{1};

  // [truncation]
  int n_levels = 0;      // 0 -> full kept basis
  int table_nodes = 2001;

  // [closed]
  bool closed_max_sector = false;

  // [bath] (ame)
  double bath_eta_g2 = 1e-3;
  double bath_omega_c_ghz = 1000.0;
  double bath_temperature_mk = 12.1;
  double bath_secular_window = 1e-7;
  bool bath_lamb_shift = false;

  // [ptre]
  double ptre_eta_g2 = 2.5e-3;
  double ptre_temperature_mk = 25.0;
  double ptre_w_mk = 8.0;
  double ptre_cutoff_thz = 1.0;

  // [svmc]
  std::string svmc_variant = "tf";
  int svmc_sweeps_tau = 450;
  int svmc_samples = 1000;
  std::vector<std::uint64_t> svmc_seeds{1};
  double svmc_temperature_mk = 12.1;

  BasisState initial_state() const;  // parsed against n
  void validate() const;             // ConfigError on any violation

  std::size_t sweep_size() const;    // rows the sweep will produce
};

RunConfig parse_run_config_text(const std::string& text);
RunConfig parse_run_config(const std::string& path);

}  // namespace annealsim
