#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include "annealsim/analysis.hpp"
#include "annealsim/model.hpp"

// Result and curve serialization. Result tables use one fixed header so
// downstream tooling never sniffs columns; all floating-point fields go
// through the same %.10g formatting, which keeps rerun output byte-stable.

namespace annealsim {

inline constexpr const char* result_csv_header =
    "model,n,s_inv,tau_ns,t_pause_ns,r,seed,total,p_up,p_down,stderr";

struct ResultRow {
  std::string model;
  int n = 0;
  double s_inv = 0.0;
  double tau_ns = 0.0;
  double t_pause_ns = 0.0;
  int r = 1;
  std::uint64_t seed = 0;
  double total = 0.0;
  double p_up = 0.0;
  double p_down = 0.0;
  double std_err = 0.0;
};

std::string format_result_row(const ResultRow& row);

// append-oriented writer; header written once on creation
class ResultWriter {
 public:
  explicit ResultWriter(const std::string& path);
  void write(const ResultRow& row);  // appends and flushes
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

// curve files: '#' metadata lines, then "s_inv,value,stderr" rows
void write_curve(const std::string& path, const SweepCurve& curve);
SweepCurve read_curve(const std::string& path);

// parse "0b0101", "0101" (binary) or a plain decimal index
BasisState parse_basis_state(const std::string& text, int n);
std::string format_basis_state(BasisState z, int n);

}  // namespace annealsim
