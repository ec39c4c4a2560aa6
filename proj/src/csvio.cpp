#include "annealsim/csvio.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "annealsim/errors.hpp"

namespace annealsim {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_result_row(const ResultRow& row) {
  std::ostringstream os;
  os << row.model << ',' << row.n << ',' << fmt(row.s_inv) << ','
     << fmt(row.tau_ns) << ',' << fmt(row.t_pause_ns) << ',' << row.r << ','
     << row.seed << ',' << fmt(row.total) << ',' << fmt(row.p_up) << ','
     << fmt(row.p_down) << ',' << fmt(row.std_err);
  return os.str();
}

ResultWriter::ResultWriter(const std::string& path) : path_(path), out_(path) {
  if (!out_) throw FormatError("cannot open result file: " + path);
  out_ << result_csv_header << '\n' << std::flush;
}

void ResultWriter::write(const ResultRow& row) {
  out_ << format_result_row(row) << '\n' << std::flush;
  if (!out_) throw FormatError("write failed: " + path_);
}

void write_curve(const std::string& path, const SweepCurve& curve) {
  curve.validate();
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open curve file: " + path);
  const auto& m = curve.meta;
  out << "# model=" << m.model << " n=" << m.n_qubits
      << " initial=" << format_basis_state(m.initial, m.n_qubits)
      << " level=" << m.level << " branch=" << (m.up_branch ? "up" : "down")
      << " approx=" << (m.approx ? "true" : "false") << '\n';
  if (!m.params.empty()) out << "# params=" << m.params << '\n';
  out << "s_inv,value,stderr\n";
  for (std::size_t k = 0; k < curve.grid.size(); ++k) {
    const double err = curve.errors.empty() ? 0.0 : curve.errors[k];
    out << fmt(curve.grid[k]) << ',' << fmt(curve.values[k]) << ','
        << fmt(err) << '\n';
  }
  if (!out) throw FormatError("write failed: " + path);
}

SweepCurve read_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open curve file: " + path);
  SweepCurve curve;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    line = trimmed(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string tok;
      while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "model") curve.meta.model = val;
        else if (key == "n") curve.meta.n_qubits = std::stoi(val);
        else if (key == "level") curve.meta.level = std::stoi(val);
        else if (key == "branch") curve.meta.up_branch = (val == "up");
        else if (key == "approx") curve.meta.approx = (val == "true");
        else if (key == "params") curve.meta.params = val;
        else if (key == "initial")
          curve.meta.initial = parse_basis_state(val, curve.meta.n_qubits);
      }
      continue;
    }
    if (!header_seen && line.rfind("s_inv", 0) == 0) {
      header_seen = true;
      continue;
    }
    std::istringstream is(line);
    std::string cell;
    double vals[3] = {0.0, 0.0, 0.0};
    int i = 0;
    while (std::getline(is, cell, ',') && i < 3) {
      try {
        vals[i] = std::stod(cell);
      } catch (const std::exception&) {
        throw FormatError("bad number in curve file " + path + ": " + cell);
      }
      ++i;
    }
    if (i < 2) throw FormatError("short row in curve file: " + path);
    curve.grid.push_back(vals[0]);
    curve.values.push_back(vals[1]);
    curve.errors.push_back(vals[2]);
  }
  curve.validate();
  return curve;
}

BasisState parse_basis_state(const std::string& text, int n) {
  std::string t = trimmed(text);
  if (t.empty()) throw FormatError("empty basis state");
  int base = 10;
  if (t.rfind("0b", 0) == 0 || t.rfind("0B", 0) == 0) {
    t = t.substr(2);
    base = 2;
  } else if (static_cast<int>(t.size()) == n &&
             t.find_first_not_of("01") == std::string::npos) {
    // an n-character 0/1 string reads as a bit pattern, msb first
    base = 2;
  }
  BasisState z = 0;
  try {
    std::size_t used = 0;
    z = std::stoull(t, &used, base);
    if (used != t.size()) throw FormatError("trailing characters");
  } catch (const std::exception&) {
    throw FormatError("cannot parse basis state: " + text);
  }
  if (n > 0 && n < 64 && z >= (1ull << n))
    throw FormatError("basis state out of range for " + std::to_string(n) +
                      " qubits: " + text);
  return z;
}

std::string format_basis_state(BasisState z, int n) {
  if (n <= 0) return "0b0";
  std::string s = "0b";
  for (int i = n - 1; i >= 0; --i) s += ((z >> i) & 1ull) ? '1' : '0';
  return s;
}

}  // namespace annealsim
