#pragma once

#include <Eigen/Dense>
#include <vector>

#include "annealsim/errors.hpp"
#include "annealsim/model.hpp"

// Total-spin structure of the p-spin model. Both the driver and the target
// commute with total S^2, so the Hamiltonian block-diagonalizes over
// irreducible spin multiplets |S, M, c> (c labels degenerate copies of the
// same S). Within one multiplet H(s) is tridiagonal in M:
//   diagonal from the target, off-diagonal -(A/2) sqrt(S(S+1) - M(M+1))
// from the driver. For even p the target diagonal is even in M, so each
// block further splits under the M <-> -M exchange into two irreducible
// tridiagonal sub-blocks whose eigenvalues are simple at every s; level
// order inside a sub-block is therefore globally continuous in s.
//
// The basis is built numerically: per-magnetization S^2 eigenspaces, with
// new multiplets at M = S orthonormalized deterministically and extended
// downward by the lowering operator so copies share matrix elements.

namespace annealsim {

struct SpinBlock {
  int two_s = 0;  // 2S
  int copy = 0;
  int col0 = 0;  // first U column (M = S); columns run M = S .. -S
  int dim = 0;   // 2S + 1
};

struct SpinSubBlock {
  int block = 0;
  int parity = +1;      // sign under M <-> -M (identity split: +1)
  int dim = 0;
  Eigen::MatrixXd embed;  // (2S+1) x dim, orthonormal columns in the M basis
  int level0 = 0;         // offset into the concatenated sector state vector
};

// dense tridiagonal H restricted to one spin-S multiplet, M = S .. -S
Eigen::MatrixXd spin_block_h(int two_s, int n, int p, double a, double b);

// derivative of the block H with respect to s, given schedule slopes
Eigen::MatrixXd spin_block_h_ds(int two_s, int n, int p, double da, double db);

// parity-split embeddings (plus, minus) of a (2S+1)-dimensional multiplet
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> parity_embed(int two_s);

class SpinBasis {
 public:
  // builds the full change of basis; memory guard N <= 12
  explicit SpinBasis(int n);

  int n() const { return n_; }
  Eigen::Index dim() const { return Eigen::Index(1) << n_; }
  const Eigen::MatrixXd& U() const { return u_; }
  const std::vector<SpinBlock>& blocks() const { return blocks_; }

  // sub-block layout for a given target exponent: parity split for even p,
  // whole blocks for odd p. Total levels always 2^N.
  std::vector<SpinSubBlock> make_sub_blocks(int p) const;

  // sigma_z^i rotated into the spin basis (cached on first use)
  const Eigen::MatrixXd& z_op(int i) const;

  // 2M per U column (collective S^z is diagonal here)
  const Eigen::VectorXi& two_m_values() const { return two_m_; }

 private:
  int n_;
  Eigen::MatrixXd u_;
  std::vector<SpinBlock> blocks_;
  Eigen::VectorXi two_m_;
  mutable std::vector<Eigen::MatrixXd> z_ops_;
};

}  // namespace annealsim
