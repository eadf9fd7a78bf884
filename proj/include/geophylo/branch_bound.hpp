#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "geophylo/constraints.hpp"
#include "geophylo/error.hpp"
#include "geophylo/heuristics.hpp"
#include "geophylo/ilp.hpp"
#include "geophylo/pairs.hpp"

namespace geophylo {

struct ExactOptions {
  double time_limit_seconds = 0;  // <= 0: unlimited
  std::int64_t node_limit = 0;    // <= 0: unlimited
  Constraints constraints;
  std::optional<LeafOrder> incumbent;
};

struct ExactResult : Solution {
  std::int64_t nodes = 0;
  std::int64_t lower_bound = 0;
};

namespace detail {

/// Depth-first branch-and-bound over the rotation variables in pre-order.
///
/// Once the rotations above a vertex are fixed, its subtree occupies a known
/// block of positions and every pair leaving the block has a known side. For
/// threshold pairs this turns the cost into a function of the owner's position
/// alone, which the bound adds to the owner's leaf and then optimizes exactly
/// by a position DP over the block. Pairs whose lowest common ancestor is
/// still open contribute a static per-level bound: for every leaf, the
/// fewest crossings with the sibling subtree over the positions of its block.
class BranchAndBound {
 public:
  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

  BranchAndBound(const IlpModel& model, const ExactOptions& opt)
      : pa_(model.pairs()), g_(model.geophylogeny()), t_(g_.tree()), n_(g_.n()), opt_(opt) {
    for (VertexId v : t_.preorder())
      if (!t_.is_leaf(v)) order_.push_back(v);
    classify_levels();
    build_static_costs();
  }

  ExactResult run() {
    ExactResult res;
    const VertexId root = t_.root();
    lo_.assign(n_, 1);
    hi_.assign(n_, n_);
    rot_.assign(t_.internal_count(), 0);
    fixed_.assign(t_.internal_count(), 0);
    wrot_.assign(t_.internal_count(), 0);
    extra_.assign(n_, std::vector<int>(static_cast<std::size_t>(n_) + 2, 0));
    tab_.assign(t_.vertex_count(), {});
    choice_.assign(t_.vertex_count(), {});
    for (VertexId v = 0; v < t_.vertex_count(); ++v) {
      tab_[v].assign(n_ - t_.size(v) + 1, kInf);
      if (!t_.is_leaf(v)) choice_[v].assign(n_ - t_.size(v) + 1, 0);
    }
    blockval_.assign(t_.vertex_count(), 0);
    open_block(root, 1);
    if (blockval_[root] >= kInf) fail(ErrorKind::kInfeasible, "constraints are infeasible: no admissible leaf order");
    blocksum_ = blockval_[root];

    // incumbent: the bound's witness, a supplied order, and greedy from the best
    LeafOrder w = witness();
    consider(w, pa_count(w));
    if (opt_.incumbent && opt_.constraints.satisfied_by(t_, *opt_.incumbent))
      consider(*opt_.incumbent, pa_count(*opt_.incumbent));
    if (opt_.constraints.empty()) {
      GreedyResult gr = greedy(g_, pa_.type(), best_order_, &pa_);
      consider(gr.order, gr.crossings);
    }

    clock_start_ = std::chrono::steady_clock::now();
    root_bound_ = blocksum_;
    search(0, root_bound_);

    res.order = best_order_;
    res.crossings = pa_count(best_order_);
    res.optimal = !stopped_;
    res.nodes = nodes_;
    res.lower_bound = stopped_ ? root_bound_ : res.crossings;
    return res;
  }

 private:
  struct LevelPair {
    LeafId p;
    LeafId q;
    bool p_left;  // p in the left child of the lca
    int lt;
    int c;  // last crossing position when q is to the left
  };

  struct GeneralPair {
    LeafId i;
    LeafId j;
    VertexId lca;
  };

  void classify_levels() {
    level_.assign(t_.vertex_count(), {});
    korder_.assign(t_.vertex_count(), {0, 0});
    for (LeafId i = 0; i < n_; ++i)
      for (LeafId j = i + 1; j < n_; ++j) {
        const VertexId w = t_.lca(i, j);
        const PairInfo& f = pa_.info(i, j);
        const bool i_left = t_.in_clade(t_.left(w), i);
        switch (f.kind) {
          case PairKind::kOrder:
            // rotation 0 puts the left child first
            korder_[w][0] += (i_left ? f.cross_small_left : f.cross_small_right) ? 1 : 0;
            korder_[w][1] += (i_left ? f.cross_small_right : f.cross_small_left) ? 1 : 0;
            break;
          case PairKind::kThreshold:
            level_[w].push_back({f.p, f.q, t_.in_clade(t_.left(w), f.p), f.lt, f.lt + (f.tie ? 1 : 0)});
            break;
          case PairKind::kGeneral:
            general_.push_back({i, j, w});
            break;
        }
      }
    for (auto& l : level_) std::sort(l.begin(), l.end(), [](const LevelPair& a, const LevelPair& b) { return a.p < b.p; });
  }

  /// Block of the leaf with the given side when v starts at s.
  Block child_block(VertexId v, int s, int r, bool in_left) const {
    const int nl = t_.size(t_.left(v)), nr = t_.size(t_.right(v));
    const bool first = in_left == (r == 0);
    if (in_left) return first ? Block{s, s + nl - 1} : Block{s + nr, s + nr + nl - 1};
    return first ? Block{s, s + nr - 1} : Block{s + nl, s + nl + nr - 1};
  }

  /// Calls fn(p, lo, hi) for every crossing range of a level pair of v under
  /// rotation r with v at s; ranges are clipped to the block of p.
  template <typename Fn>
  void level_ranges(VertexId v, int s, int r, Fn&& fn) const {
    for (const LevelPair& lp : level_[v]) {
      const Block b = child_block(v, s, r, lp.p_left);
      const bool q_left = lp.p_left != (r == 0);
      const int lo = q_left ? b.lo : std::max(b.lo, lp.lt + 1);
      const int hi = q_left ? std::min(b.hi, lp.c) : b.hi;
      if (lo <= hi) fn(lp.p, b, lo, hi);
    }
  }

  void build_static_costs() {
    const Constraints& c = opt_.constraints;
    static_.assign(t_.vertex_count(), {});
    std::vector<int> diff;
    for (VertexId v : t_.postorder()) {
      if (t_.is_leaf(v)) continue;
      const int slots = n_ - t_.size(v) + 1;
      static_[v].assign(slots, {kInf, kInf});
      const int fixed = c.rotation(v);
      for (int r = 0; r <= 1; ++r) {
        if (fixed >= 0 && fixed != r) continue;
        for (int s = 1; s <= slots; ++s) {
          std::int64_t cost = korder_[v][r];
          for (const GeneralPair& gp : general_) {
            if (gp.lca != v) continue;
            const bool i_left = t_.in_clade(t_.left(v), gp.i);
            cost += pa_.forced(gp.i, child_block(v, s, r, i_left), gp.j, child_block(v, s, r, !i_left)) ? 1 : 0;
          }
          // per owner: fewest crossings over the positions of its block
          LeafId cur = -1;
          Block cb{0, -1};
          auto flush = [&] {
            if (cur < 0) return;
            int run = 0, best = std::numeric_limits<int>::max();
            for (int a = 0; a <= cb.hi - cb.lo; ++a) {
              run += diff[a];
              best = std::min(best, run);
            }
            cost += best;
          };
          level_ranges(v, s, r, [&](LeafId p, Block b, int lo, int hi) {
            if (p != cur) {
              flush();
              cur = p;
              cb = b;
              diff.assign(b.hi - b.lo + 2, 0);
            }
            ++diff[lo - b.lo];
            --diff[hi - b.lo + 1];
          });
          flush();
          static_[v][s - 1][r] = cost;
        }
      }
    }
  }

  /// Position DP over the subtree of v for starts [lo, hi]: leaf cells carry
  /// the exact cost of pairs leaving the enclosing block, internal cells the
  /// static level bound.
  void block_dp(VertexId v, int lo, int hi) {
    if (t_.is_leaf(v)) {
      for (int s = lo; s <= hi; ++s) tab_[v][s - 1] = opt_.constraints.allows(v, s) ? extra_[v][s] : kInf;
      return;
    }
    const VertexId x = t_.left(v), y = t_.right(v);
    const int nx = t_.size(x), ny = t_.size(y);
    block_dp(x, lo, hi + ny);
    block_dp(y, lo, hi + nx);
    for (int s = lo; s <= hi; ++s) {
      std::int64_t best = kInf;
      std::uint8_t pick = 0;
      for (int r = 0; r <= 1; ++r) {
        const std::int64_t sc = static_[v][s - 1][r];
        if (sc >= kInf) continue;
        const std::int64_t a = r ? tab_[y][s - 1] : tab_[x][s - 1];
        const std::int64_t b = r ? tab_[x][s + ny - 1] : tab_[y][s + nx - 1];
        if (a >= kInf || b >= kInf) continue;
        if (a + b + sc < best) {
          best = a + b + sc;
          pick = static_cast<std::uint8_t>(r);
        }
      }
      tab_[v][s - 1] = best;
      choice_[v][s - 1] = pick;
    }
  }

  /// Evaluates the block of v at s and records the DP rotations as witness.
  void open_block(VertexId v, int s) {
    block_dp(v, s, s);
    blockval_[v] = tab_[v][s - 1];
    if (blockval_[v] >= kInf) return;
    std::vector<std::pair<VertexId, int>>& stack = scratch_stack_;
    stack.assign(1, {v, s});
    while (!stack.empty()) {
      auto [u, st] = stack.back();
      stack.pop_back();
      if (t_.is_leaf(u)) continue;
      const int r = choice_[u][st - 1];
      wrot_[t_.internal_index(u)] = static_cast<std::uint8_t>(r);
      VertexId first = r ? t_.right(u) : t_.left(u), second = r ? t_.left(u) : t_.right(u);
      stack.push_back({first, st});
      stack.push_back({second, st + t_.size(first)});
    }
  }

  std::int64_t pa_count(const LeafOrder& o) const { return detail::recount(pa_, o); }

  void consider(const LeafOrder& o, std::int64_t c) {
    if (!have_best_ || c < best_) {
      best_ = c;
      best_order_ = o;
      have_best_ = true;
    }
  }

  LeafOrder witness() const {
    std::vector<std::uint8_t> rot(t_.internal_count());
    for (int k = 0; k < t_.internal_count(); ++k) rot[k] = fixed_[k] ? rot_[k] : wrot_[k];
    return LeafOrder::from_rotations(t_, std::move(rot));
  }

  bool out_of_budget() {
    if (opt_.node_limit > 0 && nodes_ >= opt_.node_limit) return true;
    if (opt_.time_limit_seconds > 0 && (nodes_ & 63) == 0) {
      double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start_).count();
      if (elapsed > opt_.time_limit_seconds) return true;
    }
    return false;
  }

  std::int64_t general_sum() const {
    std::int64_t sum = 0;
    for (const GeneralPair& gp : general_)
      if (fixed_[t_.internal_index(gp.lca)])
        sum += pa_.forced(gp.i, {lo_[gp.i], hi_[gp.i]}, gp.j, {lo_[gp.j], hi_[gp.j]}) ? 1 : 0;
    return sum;
  }

  std::int64_t bound() const {
    if (infeasible_blocks_ > 0) return kInf;
    return fixed_cost_ + blocksum_ + general_sum();
  }

  void shift_extra(VertexId v, int s, int r, int sign) {
    level_ranges(v, s, r, [&](LeafId p, Block, int lo, int hi) {
      std::vector<int>& e = extra_[p];
      for (int a = lo; a <= hi; ++a) e[a] += sign;
    });
  }

  struct Frame {
    std::int64_t blocksum, fixed_cost;
    int infeasible;
    std::size_t saved;
  };

  void apply(VertexId v, int r) {
    const int s = lo_[t_.first_leaf(v)];
    frames_.push_back({blocksum_, fixed_cost_, infeasible_blocks_, saved_rot_.size()});
    // the witness rotations inside T(v) are rewritten below and restored on undo
    for (VertexId u : subtree_internal(v)) saved_rot_.push_back(wrot_[t_.internal_index(u)]);
    VertexId first = r ? t_.right(v) : t_.left(v), second = r ? t_.left(v) : t_.right(v);
    const int starts[2] = {s, s + t_.size(first)};
    const int k = t_.internal_index(v);
    rot_[k] = static_cast<std::uint8_t>(r);
    fixed_[k] = 1;
    shift_extra(v, s, r, +1);
    fixed_cost_ += korder_[v][r];
    blocksum_ -= blockval_[v];
    int idx = 0;
    for (VertexId c : {first, second}) {
      const int cs = starts[idx++];
      const LeafId c0 = t_.first_leaf(c);
      for (LeafId x = c0; x < c0 + t_.size(c); ++x) {
        lo_[x] = cs;
        hi_[x] = cs + t_.size(c) - 1;
      }
      open_block(c, cs);
      if (blockval_[c] >= kInf) ++infeasible_blocks_;
      else blocksum_ += blockval_[c];
    }
  }

  void undo(VertexId v) {
    const int k = t_.internal_index(v);
    const int r = rot_[k];
    const int s = lo_[t_.first_leaf(t_.left(v))] < lo_[t_.first_leaf(t_.right(v))] ? lo_[t_.first_leaf(t_.left(v))]
                                                                                     : lo_[t_.first_leaf(t_.right(v))];
    shift_extra(v, s, r, -1);
    const Frame f = frames_.back();
    frames_.pop_back();
    std::size_t at = f.saved;
    for (VertexId u : subtree_internal(v)) wrot_[t_.internal_index(u)] = saved_rot_[at++];
    saved_rot_.resize(f.saved);
    blocksum_ = f.blocksum;
    fixed_cost_ = f.fixed_cost;
    infeasible_blocks_ = f.infeasible;
    const LeafId v0 = t_.first_leaf(v);
    for (LeafId x = v0; x < v0 + t_.size(v); ++x) {
      lo_[x] = s;
      hi_[x] = s + t_.size(v) - 1;
    }
    fixed_[k] = 0;
  }

  const std::vector<VertexId>& subtree_internal(VertexId v) {
    if (subtree_cache_.empty()) {
      subtree_cache_.assign(t_.vertex_count(), {});
      for (VertexId u : t_.postorder()) {
        if (t_.is_leaf(u)) continue;
        std::vector<VertexId>& out = subtree_cache_[u];
        for (VertexId c : {t_.left(u), t_.right(u)})
          if (!t_.is_leaf(c)) {
            out.insert(out.end(), subtree_cache_[c].begin(), subtree_cache_[c].end());
          }
        out.push_back(u);
      }
    }
    return subtree_cache_[v];
  }

  void search(std::size_t depth, std::int64_t bound_here) {
    ++nodes_;
    if (bound_here >= best_) return;
    if (out_of_budget()) {
      stopped_ = true;
      return;
    }
    LeafOrder w = witness();
    const std::int64_t wc = pa_count(w);
    consider(w, wc);
    if (wc == bound_here || depth == order_.size()) return;

    const VertexId v = order_[depth];
    const int fixed = opt_.constraints.rotation(v);
    std::int64_t b[2] = {kInf, kInf};
    for (int r = 0; r <= 1; ++r) {
      if (fixed >= 0 && fixed != r) continue;
      apply(v, r);
      b[r] = bound();
      undo(v);
    }
    const int first = b[1] < b[0] ? 1 : 0;
    for (int r : {first, 1 - first}) {
      if (b[r] >= best_) continue;
      apply(v, r);
      search(depth + 1, b[r]);
      undo(v);
      if (stopped_) return;
    }
  }

  const PairAnalysis& pa_;
  const Geophylogeny& g_;
  const PhyloTree& t_;
  const int n_;
  const ExactOptions& opt_;
  std::vector<VertexId> order_;
  std::vector<std::vector<LevelPair>> level_;
  std::vector<std::array<std::int64_t, 2>> korder_;
  std::vector<GeneralPair> general_;
  std::vector<std::vector<std::array<std::int64_t, 2>>> static_;
  std::vector<std::vector<int>> extra_;  // per leaf and position: crossings with pairs leaving its block
  std::vector<std::vector<std::int64_t>> tab_;
  std::vector<std::vector<std::uint8_t>> choice_;
  std::vector<std::int64_t> blockval_;
  std::vector<int> lo_, hi_;
  std::vector<std::uint8_t> rot_, fixed_, wrot_;
  std::vector<Frame> frames_;
  std::vector<std::uint8_t> saved_rot_;
  std::vector<std::vector<VertexId>> subtree_cache_;
  std::int64_t blocksum_ = 0, fixed_cost_ = 0, root_bound_ = 0;
  int infeasible_blocks_ = 0;
  std::int64_t best_ = kInf;
  bool have_best_ = false;
  LeafOrder best_order_;
  std::int64_t nodes_ = 0;
  bool stopped_ = false;
  std::chrono::steady_clock::time_point clock_start_;
  std::vector<std::pair<VertexId, int>> scratch_stack_;
};

}  // namespace detail

/// Provably optimal leaf order for the model, unless a limit stops the search
/// first; then the best order found is returned with optimal = false.
inline ExactResult solve_exact(const IlpModel& model, const ExactOptions& options = {}) {
  detail::BranchAndBound bb(model, options);
  return bb.run();
}

}  // namespace geophylo
