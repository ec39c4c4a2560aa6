#pragma once

#include <Eigen/Dense>
#include <vector>

#include "annealsim/schedule.hpp"
#include "annealsim/spin_basis.hpp"

// Instantaneous-eigenbasis machinery shared by the dense solvers. All frames
// are computed per irreducible sub-block (see spin_basis.hpp); level order
// within a sub-block is continuous in s, the frame-rotation coupling
// <a|d/ds b> is finite-differenced between gauge-aligned frames of the same
// sub-block and vanishes identically across sub-blocks.

namespace annealsim {

struct FrameGeometry {
  const SpinBasis* basis;
  int p;
  std::vector<SpinSubBlock> subs;
  std::vector<int> distinct_of;   // sub index -> distinct frame index
  std::vector<int> distinct_rep;  // distinct frame index -> representative sub
  int total_levels;

  FrameGeometry(const SpinBasis& sb, int p);
};

// Frames evaluated on demand with a marching sign gauge (consecutive
// evaluations must be close in s; one instance per trajectory, not shared).
class ExactFrames {
 public:
  ExactFrames(const FrameGeometry& geom, const Schedule& sched,
              double fd_delta = 1e-6);

  void eval(double s, bool with_coupling = true);

  // data for one distinct sub-block family at the last eval point
  const Eigen::VectorXd& energies(int distinct) const { return e_[distinct]; }
  const Eigen::MatrixXd& vectors(int distinct) const { return v_[distinct]; }
  const Eigen::MatrixXd& coupling(int distinct) const { return m_[distinct]; }

  const FrameGeometry& geometry() const { return *geom_; }

 private:
  const FrameGeometry* geom_;
  const Schedule* sched_;
  double fd_delta_;
  std::vector<Eigen::VectorXd> e_;
  std::vector<Eigen::MatrixXd> v_, m_;
  std::vector<bool> gauge_valid_;

  void decompose(double s, int distinct, Eigen::VectorXd& e,
                 Eigen::MatrixXd& v) const;
};

// One tracked level: (sub-block, index within the sub-block)
struct LevelRef {
  int sub = 0;
  int idx = 0;
};

// Dense s-grid cache of everything the master-equation solver needs for a
// fixed kept level set: energies (cubic Hermite between nodes, derivative
// from the Hellmann-Feynman identity), frame-rotation coupling and coupling
// operator matrix elements (linear between nodes).
class FrameTable {
 public:
  FrameTable(const FrameGeometry& geom, const Schedule& sched,
             std::vector<LevelRef> kept,
             const std::vector<const Eigen::MatrixXd*>& coupling_ops,
             int n_nodes = 2001, double fd_delta = 1e-6);

  int n_kept() const { return static_cast<int>(kept_.size()); }
  int n_ops() const { return static_cast<int>(n_ops_); }
  const std::vector<LevelRef>& kept() const { return kept_; }

  void interp(double s, Eigen::VectorXd& energies, Eigen::MatrixXd& coupling,
              std::vector<Eigen::MatrixXd>& ops) const;

  // per-level integral of energy over [0, s] of the interpolated table,
  // exact on the Hermite cells; the basis of phase evolution
  Eigen::VectorXd energy_integral(double s) const;

  // frame vectors of the kept levels at a grid node nearest to s, expressed
  // in the full sector basis (used to enter/leave the frame at cycle edges)
  Eigen::MatrixXd kept_vectors_at(double s) const;

 private:
  void build_energy_integral();

  std::vector<LevelRef> kept_;
  std::size_t n_ops_;
  int n_nodes_;
  double ds_;
  const FrameGeometry* geom_;
  // node data, flattened
  std::vector<Eigen::VectorXd> e_, de_;
  std::vector<Eigen::MatrixXd> m_;
  std::vector<std::vector<Eigen::MatrixXd>> a_;
  std::vector<Eigen::MatrixXd> kept_vecs_;
  std::vector<Eigen::VectorXd> cum_;  // cumulative energy integral at nodes
};

// kept levels = the n lowest levels of the frame at s = 1 (ties by layout
// order); n = total for no truncation
std::vector<LevelRef> lowest_levels_at_anchor(const FrameGeometry& geom,
                                              const Schedule& sched,
                                              double s_anchor, int n_levels);

}  // namespace annealsim
