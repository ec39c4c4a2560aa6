#include "annealsim/spin_basis.hpp"

#include <bit>
#include <cmath>
#include <map>

namespace annealsim {

Eigen::MatrixXd spin_block_h(int two_s, int n, int p, double a, double b) {
  const int dim = two_s + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double m = 0.5 * (two_s - 2 * i);  // M runs S .. -S
    h(i, i) = 0.5 * b * (-n * std::pow(2.0 * m / n, p));
    if (i + 1 < dim) {
      const double s = 0.5 * two_s;
      const double off = -0.5 * a * std::sqrt(s * (s + 1) - m * (m - 1));
      h(i, i + 1) = off;
      h(i + 1, i) = off;
    }
  }
  return h;
}

Eigen::MatrixXd spin_block_h_ds(int two_s, int n, int p, double da, double db) {
  return spin_block_h(two_s, n, p, da, db);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> parity_embed(int two_s) {
  const int dim = two_s + 1;
  const double rh = std::sqrt(0.5);
  const int pairs = dim / 2;
  const bool has_mid = (dim % 2 == 1);
  Eigen::MatrixXd plus = Eigen::MatrixXd::Zero(dim, pairs + (has_mid ? 1 : 0));
  Eigen::MatrixXd minus = Eigen::MatrixXd::Zero(dim, pairs);
  for (int i = 0; i < pairs; ++i) {
    const int j = dim - 1 - i;
    plus(i, i) = rh;
    plus(j, i) = rh;
    minus(i, i) = rh;
    minus(j, i) = -rh;
  }
  if (has_mid) plus(pairs, pairs) = 1.0;
  return {plus, minus};
}

namespace {

// indices of computational basis states with k down spins, ascending
std::vector<std::uint64_t> subspace_states(int n, int k) {
  std::vector<std::uint64_t> out;
  out.reserve(binomial(n, k));
  for (std::uint64_t z = 0; z < (1ull << n); ++z)
    if (std::popcount(z) == k) out.push_back(z);
  return out;
}

}  // namespace

SpinBasis::SpinBasis(int n) : n_(n) {
  if (n < 1) throw DomainError("need at least one qubit");
  if (n > 12) throw CapacityError("spin basis limited to N <= 12");
  const Eigen::Index dim = Eigen::Index(1) << n;
  u_ = Eigen::MatrixXd::Zero(dim, dim);
  two_m_.resize(dim);

  // per (2S, copy): the state at the current M level, as (subspace index ->
  // coefficient) over the previous subspace's state list
  struct Ladder {
    int two_s;
    int copy;
    Eigen::VectorXd coeffs;  // over subspace_states(n, k) of the current k
  };
  std::vector<Ladder> ladders;
  std::map<int, int> copies_seen;  // two_s -> count
  // column bookkeeping: for block (two_s, copy) the U column of level M is
  // col0 + (S - M); col0 assigned on first appearance, in appearance order
  int next_col = 0;
  std::map<std::pair<int, int>, int> col0_of;

  std::vector<std::uint64_t> prev_states;
  for (int k = 0; k <= n; ++k) {
    const auto states = subspace_states(n, k);
    const int d = static_cast<int>(states.size());
    const int two_m = n - 2 * k;

    // lower every ladder that still extends to this M
    std::vector<Ladder> next_ladders;
    for (const auto& lad : ladders) {
      if (-lad.two_s > two_m) continue;  // exhausted (should not happen)
      Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
      for (int t = 0; t < static_cast<int>(prev_states.size()); ++t) {
        const double c = lad.coeffs[t];
        if (c == 0.0) continue;
        const std::uint64_t z = prev_states[t];
        for (int j = 0; j < n; ++j) {
          if (z & (1ull << j)) continue;
          const std::uint64_t y = z | (1ull << j);
          const auto it = std::lower_bound(states.begin(), states.end(), y);
          v[static_cast<int>(it - states.begin())] += c;
        }
      }
      const double s = 0.5 * lad.two_s;
      const double mp = 0.5 * (two_m + 2);  // M before lowering
      const double expect2 = s * (s + 1) - mp * (mp - 1);
      const double nrm = v.norm();
      if (std::abs(nrm * nrm - expect2) > 1e-8 * std::max(1.0, expect2))
        throw AnnealError("spin ladder norm mismatch");
      v /= nrm;
      next_ladders.push_back({lad.two_s, lad.copy, v});
    }

    // new multiplets appear where S = M
    if (two_m >= 0) {
      const int two_s = two_m;
      const int mult = static_cast<int>(binomial(n, k)) -
                       (k > 0 ? static_cast<int>(binomial(n, k - 1)) : 0);
      if (mult > 0) {
        // S^2 within this subspace: diag k + M(M+1) plus one-hop matrix
        Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(d, d);
        const double m = 0.5 * two_m;
        for (int t = 0; t < d; ++t) s2(t, t) = k + m * (m + 1);
        for (int t = 0; t < d; ++t) {
          const std::uint64_t z = states[t];
          for (int i = 0; i < n; ++i) {
            if (!(z & (1ull << i))) continue;
            for (int j = 0; j < n; ++j) {
              if (z & (1ull << j)) continue;
              const std::uint64_t y = (z & ~(1ull << i)) | (1ull << j);
              const auto it = std::lower_bound(states.begin(), states.end(), y);
              s2(static_cast<int>(it - states.begin()), t) += 1.0;
            }
          }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s2);
        const double target = 0.25 * two_s * (two_s + 2);  // S(S+1)
        Eigen::MatrixXd sel(d, mult);
        int found = 0;
        for (int t = 0; t < d; ++t) {
          if (std::abs(es.eigenvalues()[t] - target) < 0.25) {
            if (found == mult) throw AnnealError("spin multiplicity overflow");
            sel.col(found++) = es.eigenvectors().col(t);
          }
        }
        if (found != mult) throw AnnealError("spin multiplicity mismatch");
        // deterministic orthonormal basis of the eigenspace: project the
        // subspace unit vectors in index order, Gram-Schmidt, keep survivors
        std::vector<Eigen::VectorXd> kept;
        for (int t = 0; t < d && static_cast<int>(kept.size()) < mult; ++t) {
          Eigen::VectorXd w = sel * (sel.transpose() * Eigen::VectorXd::Unit(d, t));
          for (const auto& u : kept) w -= u.dot(w) * u;
          for (const auto& u : kept) w -= u.dot(w) * u;  // re-orthogonalize
          const double nn = w.norm();
          if (nn > 1e-6) kept.push_back(w / nn);
        }
        if (static_cast<int>(kept.size()) != mult)
          throw AnnealError("could not span spin eigenspace deterministically");
        int& copies = copies_seen[two_s];
        for (const auto& v : kept) {
          next_ladders.push_back({two_s, copies, v});
          col0_of[{two_s, copies}] = next_col;
          next_col += two_s + 1;
          ++copies;
        }
      }
    }

    // write U columns for every ladder at this M
    for (const auto& lad : next_ladders) {
      const int col = col0_of[{lad.two_s, lad.copy}] + (lad.two_s - two_m) / 2;
      for (int t = 0; t < d; ++t)
        u_(static_cast<Eigen::Index>(states[t]), col) = lad.coeffs[t];
      two_m_[col] = two_m;
    }

    ladders = std::move(next_ladders);
    prev_states = states;
  }

  // assemble block records in column order
  std::vector<std::tuple<int, int, int>> recs;  // (col0, two_s, copy)
  for (const auto& [key, col0] : col0_of)
    recs.emplace_back(col0, key.first, key.second);
  std::sort(recs.begin(), recs.end());
  for (const auto& [col0, two_s, copy] : recs)
    blocks_.push_back({two_s, copy, col0, two_s + 1});
}

std::vector<SpinSubBlock> SpinBasis::make_sub_blocks(int p) const {
  std::vector<SpinSubBlock> subs;
  int level0 = 0;
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    const auto& blk = blocks_[bi];
    if (p % 2 == 0) {
      auto [plus, minus] = parity_embed(blk.two_s);
      subs.push_back({static_cast<int>(bi), +1, static_cast<int>(plus.cols()),
                      plus, level0});
      level0 += static_cast<int>(plus.cols());
      if (minus.cols() > 0) {
        subs.push_back({static_cast<int>(bi), -1,
                        static_cast<int>(minus.cols()), minus, level0});
        level0 += static_cast<int>(minus.cols());
      }
    } else {
      Eigen::MatrixXd id = Eigen::MatrixXd::Identity(blk.dim, blk.dim);
      subs.push_back({static_cast<int>(bi), +1, blk.dim, id, level0});
      level0 += blk.dim;
    }
  }
  return subs;
}

const Eigen::MatrixXd& SpinBasis::z_op(int i) const {
  if (i < 0 || i >= n_) throw RangeError("qubit index out of range");
  if (z_ops_.empty()) z_ops_.resize(n_);
  if (z_ops_[i].size() == 0) {
    const Eigen::Index dim = this->dim();
    Eigen::VectorXd d(dim);
    for (Eigen::Index z = 0; z < dim; ++z)
      d[z] = (z >> i) & 1 ? -1.0 : 1.0;
    z_ops_[i] = u_.transpose() * d.asDiagonal() * u_;
  }
  return z_ops_[i];
}

}  // namespace annealsim
