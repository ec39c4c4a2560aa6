#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "annealsim/model.hpp"
#include "annealsim/schedule.hpp"

namespace annealsim {

// Instantaneous eigendecomposition at one s. Vectors are gauge fixed: the
// largest-magnitude component of each vector is made positive (ties broken
// toward the lowest index).
struct EigenFrame {
  double s = 0.0;
  Eigen::VectorXd energies;  // ascending, rad/ns
  Eigen::MatrixXd vectors;   // column per level
};

// dense full-space decomposition, N <= 14 guard (practical N <= 10)
EigenFrame dense_eigensystem(const ProblemSpec& spec, const Schedule& sched,
                             double s);

// maximum-spin-sector decomposition (dimension N+1), any N up to 64; for
// even p the sector is diagonalized in its two reflection sub-blocks and
// the merged spectrum returned. Vectors are in the sector M basis.
EigenFrame sector_eigensystem(int n, int p, const Schedule& sched, double s);

struct GapReport {
  int n = 0;
  double delta = 0.0;    // min over s of e2 - e0, rad/ns
  double s_delta = 0.0;  // argmin
  std::vector<std::pair<double, double>> profile;  // (s, gap)
};

// gap between the sector ground state and second excited state, refined
// around the coarse-grid minimum to |s| resolution 1e-5
GapReport gap_profile(int n, int p, const Schedule& sched,
                      double grid_step = 0.002);

// least-squares slope of log(delta) vs log(N); needs >= 3 points
double gap_scaling_fit(const std::vector<int>& ns,
                       const std::vector<double>& deltas);

std::string gap_report_csv(const GapReport& report);
std::string gap_report_json(const GapReport& report);

}  // namespace annealsim
