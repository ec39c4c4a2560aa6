#pragma once

#include <string>
#include <utility>
#include <vector>

#include "annealsim/errors.hpp"

namespace annealsim {

// Sampled annealing schedule A(s), B(s). Values are stored in rad/ns
// (ingestion converts from the GHz columns of the CSV); evaluation is
// piecewise linear, exact at grid points.
class Schedule {
 public:
  Schedule(std::vector<double> s, std::vector<double> a_radns,
           std::vector<double> b_radns, std::string name);

  struct AB {
    double a;
    double b;
  };

  AB eval(double s) const;
  double a(double s) const { return eval(s).a; }
  double b(double s) const { return eval(s).b; }

  // slopes dA/ds, dB/ds of the interval containing s (right-continuous)
  AB slope(double s) const;

  const std::vector<double>& grid() const { return s_; }
  const std::string& name() const { return name_; }

 private:
  std::vector<double> s_, a_, b_;
  std::string name_;
};

// CSV with header `s,A_GHz,B_GHz`; rows sorted by s covering [0, 1].
Schedule load_schedule(const std::string& csv_text, const std::string& name);
Schedule load_schedule_file(const std::string& path);

// Piecewise-linear reverse-anneal time course: descend from s=1 at rate
// 1/tau to s_inv, hold for t_pause, ascend back at rate 1/tau. Forward mode
// is s = t/tau. Multi-cycle runs repeat the course `cycles` times.
struct AnnealProtocol {
  enum class Mode { reverse, forward };

  double tau = 1.0;      // ns
  double s_inv = 0.5;    // dimensionless
  double t_pause = 0.0;  // ns
  int cycles = 1;
  Mode mode = Mode::reverse;

  // duration of one cycle
  double cycle_time() const;
  double total_time() const { return cycle_time() * cycles; }

  // s at time t within one cycle, 0 <= t <= cycle_time()
  double s_of_t(double t) const;

  // interior times where ds/dt jumps (integration segments split here)
  std::vector<double> branch_times() const;

  void validate() const;
};

}  // namespace annealsim
