#include "annealsim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "annealsim/units.hpp"

namespace annealsim {

Schedule::Schedule(std::vector<double> s, std::vector<double> a_radns,
                   std::vector<double> b_radns, std::string name)
    : s_(std::move(s)), a_(std::move(a_radns)), b_(std::move(b_radns)),
      name_(std::move(name)) {
  if (s_.size() < 2 || s_.size() != a_.size() || s_.size() != b_.size())
    throw FormatError("schedule needs at least two aligned (s, A, B) rows");
  for (std::size_t i = 1; i < s_.size(); ++i)
    if (!(s_[i] > s_[i - 1]))
      throw SchedulingError("schedule s values must be strictly increasing");
  if (s_.front() != 0.0 || s_.back() != 1.0)
    throw RangeError("schedule must cover s in [0, 1] exactly");
  for (std::size_t i = 0; i < s_.size(); ++i)
    if (a_[i] < 0.0 || b_[i] < 0.0)
      throw DomainError("schedule A and B must be nonnegative");
  bool a_ripple = false, b_ripple = false;
  for (std::size_t i = 1; i < s_.size(); ++i) {
    if (a_[i] > a_[i - 1]) a_ripple = true;
    if (b_[i] < b_[i - 1]) b_ripple = true;
  }
  if (a_ripple)
    std::cerr << "warning: schedule '" << name_ << "': A(s) is not monotone non-increasing\n";
  if (b_ripple)
    std::cerr << "warning: schedule '" << name_ << "': B(s) is not monotone non-decreasing\n";
}

namespace {
// integrator stage times can land a few ulps past the interval ends
inline double clamp_unit(double s) {
  if (s < 0.0 || s > 1.0) {
    if (s < -1e-9 || s > 1.0 + 1e-9)
      throw RangeError("schedule evaluated outside [0, 1]");
    s = std::clamp(s, 0.0, 1.0);
  }
  return s;
}
}  // namespace

Schedule::AB Schedule::eval(double s) const {
  s = clamp_unit(s);
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  if (it == s_.begin()) return {a_.front(), b_.front()};
  if (it == s_.end()) return {a_.back(), b_.back()};
  const std::size_t hi = static_cast<std::size_t>(it - s_.begin());
  const std::size_t lo = hi - 1;
  const double w = (s - s_[lo]) / (s_[hi] - s_[lo]);
  return {a_[lo] + w * (a_[hi] - a_[lo]), b_[lo] + w * (b_[hi] - b_[lo])};
}

Schedule::AB Schedule::slope(double s) const {
  s = clamp_unit(s);
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t hi = (it == s_.end()) ? s_.size() - 1
                                    : static_cast<std::size_t>(it - s_.begin());
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double ds = s_[hi] - s_[lo];
  return {(a_[hi] - a_[lo]) / ds, (b_[hi] - b_[lo]) / ds};
}

Schedule load_schedule(const std::string& csv_text, const std::string& name) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty schedule file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "s,A_GHz,B_GHz")
    throw FormatError("schedule header must be 's,A_GHz,B_GHz', got '" + line + "'");
  std::vector<double> s, a, b;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string f0, f1, f2, extra;
    if (!std::getline(row, f0, ',') || !std::getline(row, f1, ',') ||
        !std::getline(row, f2, ','))
      throw FormatError("schedule row " + std::to_string(lineno) + " needs 3 columns");
    if (std::getline(row, extra, ','))
      throw FormatError("schedule row " + std::to_string(lineno) + " has extra columns");
    try {
      std::size_t pos;
      s.push_back(std::stod(f0, &pos));
      a.push_back(ghz_to_radns(std::stod(f1, &pos)));
      b.push_back(ghz_to_radns(std::stod(f2, &pos)));
    } catch (const std::exception&) {
      throw FormatError("schedule row " + std::to_string(lineno) + " is not numeric");
    }
  }
  return Schedule(std::move(s), std::move(a), std::move(b), name);
}

Schedule load_schedule_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open schedule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_schedule(buf.str(), path);
}

void AnnealProtocol::validate() const {
  if (tau <= 0.0) throw DomainError("protocol tau must be positive");
  if (t_pause < 0.0) throw DomainError("protocol t_pause must be nonnegative");
  if (cycles < 1) throw DomainError("protocol needs at least one cycle");
  if (mode == Mode::reverse && (s_inv <= 0.0 || s_inv >= 1.0))
    throw DomainError("protocol s_inv must lie strictly inside (0, 1)");
}

double AnnealProtocol::cycle_time() const {
  if (mode == Mode::forward) return tau;
  return 2.0 * tau * (1.0 - s_inv) + t_pause;
}

double AnnealProtocol::s_of_t(double t) const {
  const double ta = cycle_time();
  if (t < 0.0 || t > ta * (1.0 + 1e-12))
    throw RangeError("time outside the anneal cycle");
  t = std::min(t, ta);
  if (mode == Mode::forward) return t / tau;
  const double t_desc = tau * (1.0 - s_inv);
  if (t <= t_desc) return 1.0 - t / tau;
  if (t <= t_desc + t_pause) return s_inv;
  return s_inv + (t - t_desc - t_pause) / tau;
}

std::vector<double> AnnealProtocol::branch_times() const {
  if (mode == Mode::forward) return {};
  const double t_desc = tau * (1.0 - s_inv);
  if (t_pause > 0.0) return {t_desc, t_desc + t_pause};
  return {t_desc};
}

}  // namespace annealsim
