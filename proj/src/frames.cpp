#include "annealsim/frames.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace annealsim {

FrameGeometry::FrameGeometry(const SpinBasis& sb, int p_)
    : basis(&sb), p(p_), subs(sb.make_sub_blocks(p_)) {
  std::map<std::pair<int, int>, int> key_to_distinct;
  distinct_of.resize(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const auto& sub = subs[i];
    const int two_s = sb.blocks()[sub.block].two_s;
    const auto key = std::make_pair(two_s, sub.parity);
    auto it = key_to_distinct.find(key);
    if (it == key_to_distinct.end()) {
      it = key_to_distinct.emplace(key, static_cast<int>(distinct_rep.size())).first;
      distinct_rep.push_back(static_cast<int>(i));
    }
    distinct_of[i] = it->second;
  }
  total_levels = 0;
  for (const auto& sub : subs) total_levels += sub.dim;
}

ExactFrames::ExactFrames(const FrameGeometry& geom, const Schedule& sched,
                         double fd_delta)
    : geom_(&geom), sched_(&sched), fd_delta_(fd_delta) {
  const std::size_t nd = geom.distinct_rep.size();
  e_.resize(nd);
  v_.resize(nd);
  m_.resize(nd);
  gauge_valid_.assign(nd, false);
}

void ExactFrames::decompose(double s, int distinct, Eigen::VectorXd& e,
                            Eigen::MatrixXd& v) const {
  const auto& sub = geom_->subs[static_cast<std::size_t>(geom_->distinct_rep[distinct])];
  const int two_s = geom_->basis->blocks()[sub.block].two_s;
  const auto [a, b] = sched_->eval(s);
  const Eigen::MatrixXd h =
      sub.embed.transpose() *
      spin_block_h(two_s, geom_->basis->n(), geom_->p, a, b) * sub.embed;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  e = es.eigenvalues();
  v = es.eigenvectors();
}

void ExactFrames::eval(double s, bool with_coupling) {
  const std::size_t nd = geom_->distinct_rep.size();
  for (std::size_t d = 0; d < nd; ++d) {
    Eigen::VectorXd e;
    Eigen::MatrixXd v;
    decompose(s, static_cast<int>(d), e, v);
    if (gauge_valid_[d]) {
      for (Eigen::Index c = 0; c < v.cols(); ++c)
        if (v_[d].col(c).dot(v.col(c)) < 0.0) v.col(c) = -v.col(c);
    } else {
      // deterministic local gauge: largest-magnitude component positive
      for (Eigen::Index c = 0; c < v.cols(); ++c) {
        Eigen::Index imax = 0;
        v.col(c).cwiseAbs().maxCoeff(&imax);
        if (v(imax, c) < 0.0) v.col(c) = -v.col(c);
      }
      gauge_valid_[d] = true;
    }
    e_[d] = std::move(e);
    v_[d] = v;

    if (with_coupling) {
      const bool forward = s + fd_delta_ <= 1.0;
      const double s2 = forward ? s + fd_delta_ : s - fd_delta_;
      Eigen::VectorXd e2;
      Eigen::MatrixXd v2;
      decompose(s2, static_cast<int>(d), e2, v2);
      for (Eigen::Index c = 0; c < v2.cols(); ++c)
        if (v.col(c).dot(v2.col(c)) < 0.0) v2.col(c) = -v2.col(c);
      Eigen::MatrixXd r = v.transpose() * v2;
      Eigen::MatrixXd m = (r - Eigen::MatrixXd::Identity(r.rows(), r.cols())) /
                          (forward ? fd_delta_ : -fd_delta_);
      m_[d] = 0.5 * (m - m.transpose());
    }
  }
}

std::vector<LevelRef> lowest_levels_at_anchor(const FrameGeometry& geom,
                                              const Schedule& sched,
                                              double s_anchor, int n_levels) {
  ExactFrames frames(geom, sched);
  frames.eval(s_anchor, false);
  std::vector<std::pair<double, LevelRef>> all;
  for (std::size_t si = 0; si < geom.subs.size(); ++si) {
    const auto& e = frames.energies(geom.distinct_of[si]);
    for (int k = 0; k < geom.subs[si].dim; ++k)
      all.push_back({e[k], {static_cast<int>(si), k}});
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    return x.first < y.first;
  });
  if (n_levels > static_cast<int>(all.size()))
    throw CapacityError("truncation larger than the spectrum");
  std::vector<LevelRef> kept;
  kept.reserve(n_levels);
  for (int i = 0; i < n_levels; ++i) kept.push_back(all[i].second);
  return kept;
}

FrameTable::FrameTable(const FrameGeometry& geom, const Schedule& sched,
                       std::vector<LevelRef> kept,
                       const std::vector<const Eigen::MatrixXd*>& coupling_ops,
                       int n_nodes, double fd_delta)
    : kept_(std::move(kept)), n_ops_(coupling_ops.size()), n_nodes_(n_nodes),
      ds_(1.0 / (n_nodes - 1)), geom_(&geom) {
  if (n_nodes_ < 2) throw DomainError("frame table needs at least two nodes");
  const int nk = n_kept();
  const auto& subs = geom.subs;
  const auto& blocks = geom.basis->blocks();
  const int n = geom.basis->n();

  // pre-extract coupling-operator blocks between the sub-blocks that host
  // kept levels, in sub-block coordinates
  std::vector<int> kept_subs;
  for (const auto& lr : kept_) kept_subs.push_back(lr.sub);
  std::sort(kept_subs.begin(), kept_subs.end());
  kept_subs.erase(std::unique(kept_subs.begin(), kept_subs.end()),
                  kept_subs.end());
  std::map<std::pair<int, int>, std::vector<Eigen::MatrixXd>> op_blocks;
  for (int sa : kept_subs)
    for (int sb : kept_subs) {
      std::vector<Eigen::MatrixXd> per_op;
      per_op.reserve(n_ops_);
      const auto& blk_a = blocks[subs[sa].block];
      const auto& blk_b = blocks[subs[sb].block];
      for (const auto* op : coupling_ops)
        per_op.push_back(subs[sa].embed.transpose() *
                         op->block(blk_a.col0, blk_b.col0, blk_a.dim, blk_b.dim) *
                         subs[sb].embed);
      op_blocks.emplace(std::make_pair(sa, sb), std::move(per_op));
    }

  e_.resize(n_nodes_);
  de_.resize(n_nodes_);
  m_.resize(n_nodes_);
  a_.resize(n_nodes_);
  kept_vecs_.resize(2);

  ExactFrames frames(geom, sched, fd_delta);
  for (int j = 0; j < n_nodes_; ++j) {
    const double s = std::min(1.0, j * ds_);
    frames.eval(s, true);

    Eigen::VectorXd e(nk), de(nk);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nk, nk);
    // Hellmann-Feynman slope within each sub-block
    const auto [da, db] = sched.slope(s);
    for (int ai = 0; ai < nk; ++ai) {
      const auto& lr = kept_[ai];
      const int d = geom.distinct_of[lr.sub];
      e[ai] = frames.energies(d)[lr.idx];
      const auto& sub = subs[lr.sub];
      const int two_s = blocks[sub.block].two_s;
      const Eigen::MatrixXd hp = sub.embed.transpose() *
                                 spin_block_h_ds(two_s, n, geom.p, da, db) *
                                 sub.embed;
      const Eigen::VectorXd va = frames.vectors(d).col(lr.idx);
      de[ai] = va.dot(hp * va);
      for (int bi = 0; bi < nk; ++bi) {
        if (kept_[bi].sub != lr.sub) continue;
        m(ai, bi) = frames.coupling(d)(lr.idx, kept_[bi].idx);
      }
    }

    std::vector<Eigen::MatrixXd> aops(n_ops_,
                                      Eigen::MatrixXd::Zero(nk, nk));
    for (int ai = 0; ai < nk; ++ai)
      for (int bi = 0; bi < nk; ++bi) {
        const auto it = op_blocks.find({kept_[ai].sub, kept_[bi].sub});
        const Eigen::VectorXd va =
            frames.vectors(geom.distinct_of[kept_[ai].sub]).col(kept_[ai].idx);
        const Eigen::VectorXd vb =
            frames.vectors(geom.distinct_of[kept_[bi].sub]).col(kept_[bi].idx);
        for (std::size_t oi = 0; oi < n_ops_; ++oi)
          aops[oi](ai, bi) = va.dot(it->second[oi] * vb);
      }

    e_[j] = std::move(e);
    de_[j] = std::move(de);
    m_[j] = std::move(m);
    a_[j] = std::move(aops);

    if (j == 0 || j == n_nodes_ - 1) {
      // kept-level frame vectors in the full sector basis, for entering and
      // leaving the rotating frame at cycle edges
      Eigen::MatrixXd kv =
          Eigen::MatrixXd::Zero(geom.total_levels, nk);
      for (int ai = 0; ai < nk; ++ai) {
        const auto& lr = kept_[ai];
        const auto& sub = subs[lr.sub];
        const Eigen::VectorXd u =
            sub.embed * frames.vectors(geom.distinct_of[lr.sub]).col(lr.idx);
        const int col0 = blocks[sub.block].col0;
        for (int r = 0; r < u.size(); ++r) kv(col0 + r, ai) = u[r];
      }
      kept_vecs_[j == 0 ? 0 : 1] = std::move(kv);
    }
  }
  build_energy_integral();
}

void FrameTable::build_energy_integral() {
  cum_.resize(n_nodes_);
  cum_[0] = Eigen::VectorXd::Zero(n_kept());
  for (int j = 0; j + 1 < n_nodes_; ++j)
    cum_[j + 1] = cum_[j] + ds_ * (0.5 * (e_[j] + e_[j + 1]) +
                                   (ds_ / 12.0) * (de_[j] - de_[j + 1]));
}

namespace {
// integrator stage times can land a few ulps past the interval ends
inline double clamp_unit_s(double s) {
  if (s < 0.0 || s > 1.0) {
    if (s < -1e-9 || s > 1.0 + 1e-9)
      throw RangeError("frame table evaluated outside [0, 1]");
    s = std::clamp(s, 0.0, 1.0);
  }
  return s;
}
}  // namespace

Eigen::VectorXd FrameTable::energy_integral(double s) const {
  s = clamp_unit_s(s);
  int j = static_cast<int>(s / ds_);
  j = std::clamp(j, 0, n_nodes_ - 2);
  const double th = (s - j * ds_) / ds_;
  const double t2 = th * th, t3 = t2 * th, t4 = t3 * th;
  // antiderivatives of the Hermite basis polynomials
  const double i00 = 0.5 * t4 - t3 + th;
  const double i10 = 0.25 * t4 - (2.0 / 3.0) * t3 + 0.5 * t2;
  const double i01 = -0.5 * t4 + t3;
  const double i11 = 0.25 * t4 - t3 / 3.0;
  return cum_[j] + ds_ * (i00 * e_[j] + i01 * e_[j + 1] +
                          ds_ * (i10 * de_[j] + i11 * de_[j + 1]));
}

void FrameTable::interp(double s, Eigen::VectorXd& energies,
                        Eigen::MatrixXd& coupling,
                        std::vector<Eigen::MatrixXd>& ops) const {
  s = clamp_unit_s(s);
  int j = static_cast<int>(s / ds_);
  j = std::clamp(j, 0, n_nodes_ - 2);
  const double th = (s - j * ds_) / ds_;
  // cubic Hermite on energies
  const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
  const double h10 = th * (1 - th) * (1 - th);
  const double h01 = th * th * (3 - 2 * th);
  const double h11 = th * th * (th - 1);
  energies = h00 * e_[j] + h01 * e_[j + 1] +
             ds_ * (h10 * de_[j] + h11 * de_[j + 1]);
  coupling = (1 - th) * m_[j] + th * m_[j + 1];
  ops.resize(n_ops_);
  for (std::size_t oi = 0; oi < n_ops_; ++oi)
    ops[oi] = (1 - th) * a_[j][oi] + th * a_[j + 1][oi];
}

Eigen::MatrixXd FrameTable::kept_vectors_at(double s) const {
  if (s < 0.25) return kept_vecs_[0];
  if (s > 0.75) return kept_vecs_[1];
  throw RangeError("kept-level vectors stored only at the anneal endpoints");
}

}  // namespace annealsim
