#include "annealsim/runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "annealsim/csvio.hpp"
#include "annealsim/errors.hpp"

namespace annealsim {

namespace {

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double to_number(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw FormatError("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not a number: " + v);
  }
}

// "start:step:stop" inclusive of both ends (stop within half a step)
std::vector<double> expand_range(const std::string& v, const std::string& key) {
  std::vector<double> parts;
  std::istringstream is(v);
  std::string tok;
  while (std::getline(is, tok, ':')) parts.push_back(to_number(tok, key));
  if (parts.size() != 3)
    throw ConfigError("key '" + key + "': range needs start:step:stop");
  const double start = parts[0], step = parts[1], stop = parts[2];
  if (step == 0.0 || (stop - start) / step < 0.0)
    throw ConfigError("key '" + key + "': bad range direction");
  std::vector<double> out;
  const long count = std::lround((stop - start) / step);
  for (long k = 0; k <= count; ++k) {
    const double x = start + k * step;
    if ((step > 0 && x > stop + 0.5 * step) ||
        (step < 0 && x < stop + 0.5 * step))
      break;
    out.push_back(x);
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty range");
  return out;
}

struct Value {
  std::string raw;
  bool is_string = false;
  bool is_array = false;
  std::vector<std::string> tokens;  // array elements, trimmed
};

Value parse_value(std::string v, const std::string& key) {
  Value out;
  v = trimmed(v);
  if (v.empty()) throw ConfigError("key '" + key + "' has no value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw ConfigError("key '" + key + "': unterminated string");
    out.raw = v.substr(1, v.size() - 2);
    out.is_string = true;
    return out;
  }
  if (v.front() == '[') {
    if (v.back() != ']')
      throw ConfigError("key '" + key + "': unterminated array");
    out.is_array = true;
    std::istringstream is(v.substr(1, v.size() - 2));
    std::string tok;
    while (std::getline(is, tok, ',')) {
      tok = trimmed(tok);
      if (!tok.empty()) out.tokens.push_back(tok);
    }
    if (out.tokens.empty())
      throw ConfigError("key '" + key + "': empty array");
    return out;
  }
  out.raw = v;
  return out;
}

std::vector<double> as_list(const Value& v, const std::string& key) {
  if (v.is_array) {
    std::vector<double> out;
    for (const auto& t : v.tokens) out.push_back(to_number(t, key));
    return out;
  }
  if (v.raw.find(':') != std::string::npos) return expand_range(v.raw, key);
  return {to_number(v.raw, key)};
}

std::vector<std::uint64_t> as_u64_list(const Value& v, const std::string& key) {
  std::vector<std::string> toks =
      v.is_array ? v.tokens : std::vector<std::string>{v.raw};
  std::vector<std::uint64_t> out;
  for (const auto& t : toks) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(t, &used));
      if (used != t.size()) throw FormatError("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': not an unsigned integer: " + t);
    }
  }
  return out;
}

double as_double(const Value& v, const std::string& key) {
  if (v.is_array || v.is_string)
    throw ConfigError("key '" + key + "' expects a single number");
  return to_number(v.raw, key);
}

int as_int(const Value& v, const std::string& key) {
  const double x = as_double(v, key);
  const long r = std::lround(x);
  if (std::abs(x - r) > 1e-9)
    throw ConfigError("key '" + key + "' expects an integer");
  return static_cast<int>(r);
}

bool as_bool(const Value& v, const std::string& key) {
  if (!v.is_array && !v.is_string) {
    if (v.raw == "true") return true;
    if (v.raw == "false") return false;
  }
  throw ConfigError("key '" + key + "' expects true or false");
}

std::string as_string(const Value& v, const std::string& key) {
  if (v.is_array) throw ConfigError("key '" + key + "' expects a string");
  return v.raw;
}

std::vector<int> as_int_list(const Value& v, const std::string& key) {
  std::vector<int> out;
  for (double x : as_list(v, key)) {
    const long r = std::lround(x);
    if (std::abs(x - r) > 1e-9)
      throw ConfigError("key '" + key + "' expects integers");
    out.push_back(static_cast<int>(r));
  }
  return out;
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text) {
  RunConfig cfg;
  cfg.s_inv.clear();
  cfg.tau_ns.clear();
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trimmed(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unterminated section header");
      section = trimmed(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string full = section.empty() ? key : section + "." + key;
    const Value v = parse_value(line.substr(eq + 1), full);

    if (full == "run.model" || full == "model") cfg.model = as_string(v, full);
    else if (full == "run.schedule" || full == "schedule")
      cfg.schedule_path = as_string(v, full);
    else if (full == "run.output" || full == "output")
      cfg.output = as_string(v, full);
    else if (full == "run.coupling" || full == "coupling")
      cfg.coupling = as_string(v, full);
    else if (full == "run.threads" || full == "threads")
      cfg.threads = as_int(v, full);
    else if (full == "problem.n") cfg.n = as_int(v, full);
    else if (full == "problem.p") cfg.p = as_int(v, full);
    else if (full == "problem.initial") cfg.initial = as_string(v, full);
    else if (full == "protocol.mode") cfg.mode = as_string(v, full);
    else if (full == "protocol.s_inv") cfg.s_inv = as_list(v, full);
    else if (full == "protocol.tau_ns") cfg.tau_ns = as_list(v, full);
    else if (full == "protocol.t_pause_ns") cfg.t_pause_ns = as_list(v, full);
    else if (full == "protocol.cycles") cfg.cycles = as_int_list(v, full);
    else if (full == "truncation.n_levels") cfg.n_levels = as_int(v, full);
    else if (full == "truncation.table_nodes")
      cfg.table_nodes = as_int(v, full);
    else if (full == "closed.max_sector_only")
      cfg.closed_max_sector = as_bool(v, full);
    else if (full == "bath.eta_g2") cfg.bath_eta_g2 = as_double(v, full);
    else if (full == "bath.omega_c_ghz")
      cfg.bath_omega_c_ghz = as_double(v, full);
    else if (full == "bath.temperature_mk")
      cfg.bath_temperature_mk = as_double(v, full);
    else if (full == "bath.secular_window")
      cfg.bath_secular_window = as_double(v, full);
    else if (full == "bath.lamb_shift")
      cfg.bath_lamb_shift = as_bool(v, full);
    else if (full == "ptre.eta_g2") cfg.ptre_eta_g2 = as_double(v, full);
    else if (full == "ptre.temperature_mk")
      cfg.ptre_temperature_mk = as_double(v, full);
    else if (full == "ptre.w_mk") cfg.ptre_w_mk = as_double(v, full);
    else if (full == "ptre.cutoff_thz")
      cfg.ptre_cutoff_thz = as_double(v, full);
    else if (full == "svmc.variant") cfg.svmc_variant = as_string(v, full);
    else if (full == "svmc.sweeps_tau")
      cfg.svmc_sweeps_tau = as_int(v, full);
    else if (full == "svmc.samples") cfg.svmc_samples = as_int(v, full);
    else if (full == "svmc.temperature_mk")
      cfg.svmc_temperature_mk = as_double(v, full);
    else if (full == "svmc.seed") {
      cfg.svmc_seeds = as_u64_list(v, full);
    } else {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": unknown key '" + full + "'");
    }
  }
  return cfg;
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config_text(buf.str());
}

BasisState RunConfig::initial_state() const {
  return parse_basis_state(initial, n);
}

void RunConfig::validate() const {
  const bool known = model == "closed" || model == "ame" || model == "ptre" ||
                     model == "svmc";
  if (!known) throw ConfigError("unknown model: " + model);
  if (n < 1 || n > 30) throw ConfigError("problem.n out of range");
  if (p < 2) throw ConfigError("problem.p must be at least 2");
  if (mode != "reverse" && mode != "forward")
    throw ConfigError("protocol.mode must be reverse or forward");
  if (s_inv.empty() && mode == "reverse")
    throw ConfigError("protocol.s_inv must be a non-empty list");
  if (tau_ns.empty()) throw ConfigError("protocol.tau_ns must be non-empty");
  if (t_pause_ns.empty() || cycles.empty())
    throw ConfigError("protocol sweep lists must be non-empty");
  for (double s : s_inv)
    if (!(s > 0.0 && s < 1.0))
      throw ConfigError("s_inv values must lie in (0, 1)");
  for (double t : tau_ns)
    if (!(t > 0.0)) throw ConfigError("tau_ns values must be positive");
  for (double t : t_pause_ns)
    if (t < 0.0) throw ConfigError("t_pause_ns values must be nonnegative");
  for (int r : cycles)
    if (r < 1) throw ConfigError("cycles values must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (coupling != "independent" && coupling != "collective")
    throw ConfigError("coupling must be independent or collective");
  if (svmc_variant != "plain" && svmc_variant != "tf" &&
      svmc_variant != "svmc" && svmc_variant != "svmc_tf")
    throw ConfigError("svmc.variant must be plain/svmc or tf/svmc_tf");
  if (svmc_sweeps_tau < 1 || svmc_samples < 1)
    throw ConfigError("svmc.sweeps_tau and svmc.samples must be positive");
  if (svmc_seeds.empty()) throw ConfigError("svmc.seed must be non-empty");
  if (bath_temperature_mk <= 0.0 || ptre_temperature_mk <= 0.0 ||
      svmc_temperature_mk <= 0.0)
    throw ConfigError("temperatures must be positive");
  if (ptre_w_mk <= 0.0) throw ConfigError("ptre.w_mk must be positive");
  if (n_levels < 0) throw ConfigError("truncation.n_levels must be >= 0");
  if (table_nodes < 16) throw ConfigError("truncation.table_nodes too small");
  initial_state();  // throws on malformed state
}

std::size_t RunConfig::sweep_size() const {
  const std::size_t s = (mode == "forward") ? 1 : s_inv.size();
  std::size_t rows = s * tau_ns.size() * t_pause_ns.size() * cycles.size();
  if (model == "svmc") rows *= svmc_seeds.size();
  return rows;
}

}  // namespace annealsim
