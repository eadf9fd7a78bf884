#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "geophylo/crossings.hpp"
#include "geophylo/error.hpp"
#include "geophylo/heuristics.hpp"
#include "geophylo/pairs.hpp"
#include "geophylo/tanglegram.hpp"

namespace geophylo {

/// One bit per undecided pair, in the order of PairClasses::undecided_pairs():
/// 0 routes the leader of the owner left of the other site, 1 right of it.
using DecisionWord = std::vector<std::uint8_t>;

/// Position threshold of an undecided pair (p, q): positions 1..lt lie left of
/// the point where the leader of p would meet q, position lt + 1 lies on it
/// when tie is set.
struct DecisionBound {
  int lt = 0;
  bool tie = false;
};

inline std::optional<DecisionBound> decision_bound(const Geophylogeny& g, LeaderType type, LeafId p, LeafId q) {
  const Point &pp = g.site(p), &pq = g.site(q);
  Wide num, den;
  if (type == LeaderType::kS) {
    if (pq.y <= pp.y) return std::nullopt;
    den = Wide(pq.y) - pp.y;
    num = Wide(pp.x) * den + (Wide(pq.x) - pp.x) * (Wide(g.ytop()) - pp.y);
  } else {
    num = pq.x;
    den = 1;
  }
  auto [lt, tie] = PairAnalysis::rank_threshold(g, num, den);
  return DecisionBound{lt, tie};
}

/// Narrows the interval of the owner for one decision. Positions on the
/// threshold satisfy both sides.
inline void apply_decision(Block& b, const DecisionBound& d, bool right) {
  if (right) b.lo = std::max(b.lo, d.lt + 1);
  else b.hi = std::min(b.hi, d.lt + (d.tie ? 1 : 0));
}

/// Leaf intervals implied by a word; an interval with lo > hi marks the word as
/// over-restricted. order, when given, is the sequence in which the decisions
/// are applied.
inline std::vector<Block> word_intervals(const Geophylogeny& g, LeaderType type, const PairClasses& pc,
                                         const DecisionWord& word, const std::vector<int>* order = nullptr) {
  const auto& pairs = pc.undecided_pairs();
  if (word.size() != pairs.size()) fail(ErrorKind::kInvalidInput, "decision word length differs from k");
  std::vector<Block> iv(g.n(), Block{1, g.n()});
  auto step = [&](std::size_t k) {
    auto [p, q] = pairs[k];
    if (auto d = decision_bound(g, type, p, q)) apply_decision(iv[p], *d, word[k] != 0);
  };
  if (order) {
    for (int k : *order) step(static_cast<std::size_t>(k));
  } else {
    for (std::size_t k = 0; k < pairs.size(); ++k) step(k);
  }
  return iv;
}

/// Orientation of the complete graph on the sites for one decision word.
struct Tournament {
  std::vector<std::vector<std::uint8_t>> before;  // before[a][b]: a precedes b
  std::vector<std::pair<LeafId, LeafId>> reoriented;
  int conflicting_triples = 0;
  bool acyclic = true;
  std::vector<LeafId> order;  // by number of successors; ties by x, y, index
};

inline Tournament build_tournament(const Geophylogeny& g, LeaderType type, const PairClasses& pc, const DecisionWord& word) {
  const int n = g.n();
  const auto& pairs = pc.undecided_pairs();
  if (word.size() != pairs.size()) fail(ErrorKind::kInvalidInput, "decision word length differs from k");
  Tournament t;
  t.before.assign(n, std::vector<std::uint8_t>(n, 0));
  std::vector<LeafId> view = geometry_free_order(g, type);
  std::vector<int> rank(n);
  for (int k = 0; k < n; ++k) rank[view[k]] = k;
  for (LeafId a = 0; a < n; ++a)
    for (LeafId b = 0; b < n; ++b)
      if (a != b) t.before[a][b] = rank[a] < rank[b];
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [p, q] = pairs[k];
    // leader of p left of q: no crossing iff the leaf of p comes first
    t.before[p][q] = word[k] == 0;
    t.before[q][p] = word[k] != 0;
  }
  // two undecided pairs sharing the covered site, closing a directed triangle
  std::vector<std::vector<LeafId>> owners(n);
  for (auto [p, q] : pairs) owners[q].push_back(p);
  std::vector<std::vector<std::uint8_t>> flip(n, std::vector<std::uint8_t>(n, 0));
  for (LeafId q = 0; q < n; ++q)
    for (std::size_t x = 0; x < owners[q].size(); ++x)
      for (std::size_t y = x + 1; y < owners[q].size(); ++y) {
        const LeafId a = owners[q][x], b = owners[q][y];
        if (a == b) continue;
        const bool cyc = (t.before[a][q] && t.before[q][b] && t.before[b][a]) ||
                         (t.before[b][q] && t.before[q][a] && t.before[a][b]);
        if (!cyc) continue;
        ++t.conflicting_triples;
        flip[std::min(a, b)][std::max(a, b)] = 1;
      }
  for (LeafId a = 0; a < n; ++a)
    for (LeafId b = a + 1; b < n; ++b)
      if (flip[a][b]) {
        std::swap(t.before[a][b], t.before[b][a]);
        t.reoriented.emplace_back(a, b);
      }
  std::vector<int> succ(n, 0);
  for (LeafId a = 0; a < n; ++a)
    for (LeafId b = 0; b < n; ++b) succ[a] += t.before[a][b];
  t.order.resize(n);
  std::iota(t.order.begin(), t.order.end(), 0);
  std::sort(t.order.begin(), t.order.end(), [&](LeafId a, LeafId b) {
    if (succ[a] != succ[b]) return succ[a] > succ[b];
    const Point &pa = g.site(a), &pb = g.site(b);
    if (pa.x != pb.x) return pa.x < pb.x;
    if (pa.y != pb.y) return pa.y < pb.y;
    return a < b;
  });
  // a tournament is acyclic iff its successor counts are all distinct
  for (int k = 0; k < n; ++k)
    if (succ[t.order[k]] != n - 1 - k) t.acyclic = false;
  return t;
}

struct FptProgress {
  std::int64_t words = 0;   // complete words evaluated
  std::int64_t pruned = 0;  // partial words cut by the bound or over-restricted
};

struct FptOptions {
  int k_cap = 20;
  std::function<void(const FptProgress&)> progress;
  bool tournament = true;  // also evaluate each complete word through its tournament
};

struct FptResult : Solution {
  int k = 0;
  FptProgress stats;
  std::int64_t conflicting_triples = 0;
  std::int64_t reoriented_edges = 0;
  std::int64_t cyclic_tournaments = 0;
  std::int64_t credit_mismatches = 0;  // tournament count differing from the recount
};

namespace detail {

/// Enumerates, per leaf owning undecided pairs, the maximal position ranges in
/// which every owned decision is the same (the non-rejected decision words,
/// grouped), depth-first with a pairwise DP bound over the resulting intervals.
class FptSearch {
 public:
  FptSearch(const Geophylogeny& g, LeaderType type, const FptOptions& opt)
      : g_(g), type_(type), opt_(opt), pa_(g, type), pc_(g, type), n_(g.n()) {}

  FptResult run() {
    FptResult res;
    res.k = pc_.k();
    if (res.k > opt_.k_cap)
      fail(ErrorKind::kCapExceeded, "FPT refused: k = " + std::to_string(res.k) + " undecided pairs exceeds k_cap = " +
                                        std::to_string(opt_.k_cap));
    build_slots();
    Solution inc = Pipeline::parse(kDefaultPipeline).run(g_, type_, pa_);
    best_ = inc.crossings;
    best_order_ = inc.order;
    iv_.assign(n_, Block{1, n_});
    dfs(0);
    res.order = best_order_;
    res.crossings = count_crossings(g_, best_order_, type_);
    res.optimal = true;
    res.stats = stats_;
    res.conflicting_triples = triples_;
    res.reoriented_edges = reoriented_;
    res.cyclic_tournaments = cyclic_;
    res.credit_mismatches = mismatches_;
    if (opt_.progress) opt_.progress(stats_);
    return res;
  }

 private:
  void build_slots() {
    std::vector<std::uint8_t> general(n_, 0);
    std::vector<std::vector<DecisionBound>> owned(n_);
    for (LeafId i = 0; i < n_; ++i)
      for (LeafId j = i + 1; j < n_; ++j) {
        const PairInfo& f = pa_.info(i, j);
        if (f.kind == PairKind::kGeneral) general[i] = general[j] = 1;
        if (f.kind == PairKind::kThreshold) owned[f.p].push_back({f.lt, f.tie});
      }
    for (LeafId p = 0; p < n_; ++p) {
      std::vector<Block> slots;
      if (general[p]) {
        // degenerate pairs are only exact at fixed positions
        for (int a = 1; a <= n_; ++a) slots.push_back({a, a});
      } else if (!owned[p].empty()) {
        auto cases = [&](int a) {
          std::vector<int> c;
          for (const DecisionBound& d : owned[p]) c.push_back(a <= d.lt ? 0 : (d.tie && a == d.lt + 1 ? 1 : 2));
          return c;
        };
        int lo = 1;
        std::vector<int> cur = cases(1);
        for (int a = 2; a <= n_ + 1; ++a) {
          std::vector<int> c = a <= n_ ? cases(a) : std::vector<int>{};
          if (a > n_ || c != cur) {
            slots.push_back({lo, a - 1});
            lo = a;
            cur = std::move(c);
          }
        }
      }
      if (slots.size() > 1) {
        owners_.push_back(p);
        slots_.push_back(std::move(slots));
      }
    }
    // owners with many pairs first: their slots move the bound the most
    std::vector<std::size_t> idx(owners_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return owned[owners_[a]].size() > owned[owners_[b]].size();
    });
    std::vector<LeafId> o;
    std::vector<std::vector<Block>> s;
    for (std::size_t k : idx) {
      o.push_back(owners_[k]);
      s.push_back(std::move(slots_[k]));
    }
    owners_ = std::move(o);
    slots_ = std::move(s);
  }

  /// Crossing cost of a left of b at their lowest common ancestor; a lower
  /// bound over the current intervals, exact once the owner is in a slot.
  std::int64_t cost(LeafId a, LeafId b) const {
    const PairInfo& f = pa_.info(a, b);
    switch (f.kind) {
      case PairKind::kOrder:
        return (a < b ? f.cross_small_left : f.cross_small_right) ? 1 : 0;
      case PairKind::kThreshold:
        if (f.p == a) return iv_[a].lo >= f.lt + 1 ? 1 : 0;
        return iv_[b].hi <= f.lt + (f.tie ? 1 : 0) ? 1 : 0;
      case PairKind::kGeneral:
        break;
    }
    if (iv_[a].lo == iv_[a].hi && iv_[b].lo == iv_[b].hi)
      return leaders_cross(g_, type_, a, iv_[a].lo, b, iv_[b].lo) ? 1 : 0;
    return 0;
  }

  std::optional<std::pair<LeafOrder, std::int64_t>> evaluate() const {
    return pairwise_dp(g_.tree(), iv_, [&](LeafId a, LeafId b) { return cost(a, b); });
  }

  void consider(const LeafOrder& o) {
    const std::int64_t c = count_crossings(g_, o, type_);
    if (c < best_) {
      best_ = c;
      best_order_ = o;
    }
  }

  void complete() {
    ++stats_.words;
    if (opt_.progress && (stats_.words & 1023) == 0) opt_.progress(stats_);
    auto exact = evaluate();
    if (!exact) return;
    if (opt_.tournament) {
      DecisionWord word;
      for (auto [p, q] : pc_.undecided_pairs()) {
        auto d = decision_bound(g_, type_, p, q);
        word.push_back(d && iv_[p].lo >= d->lt + 1 ? 1 : 0);
      }
      Tournament k = build_tournament(g_, type_, pc_, word);
      triples_ += k.conflicting_triples;
      reoriented_ += static_cast<std::int64_t>(k.reoriented.size());
      if (!k.acyclic) ++cyclic_;
      Tanglegram tg(g_.tree(), k.order);
      tg.allowed = iv_;
      tg.credit = static_cast<std::int64_t>(k.reoriented.size());
      TanglegramResult tr = solve_tanglegram(tg);
      const std::int64_t rc = count_crossings(g_, tr.order, type_);
      if (rc != tr.crossings) ++mismatches_;
      if (rc <= best_ && rc <= exact->second) {
        best_ = rc;
        best_order_ = tr.order;
        return;
      }
    }
    consider(exact->first);
  }

  void dfs(std::size_t depth) {
    if (depth == owners_.size()) {
      complete();
      return;
    }
    const LeafId p = owners_[depth];
    const Block saved = iv_[p];
    std::vector<std::pair<std::int64_t, std::size_t>> cand;
    for (std::size_t s = 0; s < slots_[depth].size(); ++s) {
      iv_[p] = slots_[depth][s];
      auto lb = evaluate();
      if (!lb || lb->second >= best_) {
        ++stats_.pruned;
        continue;
      }
      cand.emplace_back(lb->second, s);
    }
    std::stable_sort(cand.begin(), cand.end());
    for (auto [lb, s] : cand) {
      if (lb >= best_) {
        ++stats_.pruned;
        continue;
      }
      iv_[p] = slots_[depth][s];
      dfs(depth + 1);
    }
    iv_[p] = saved;
  }

  const Geophylogeny& g_;
  LeaderType type_;
  const FptOptions& opt_;
  PairAnalysis pa_;
  PairClasses pc_;
  int n_;
  std::vector<LeafId> owners_;
  std::vector<std::vector<Block>> slots_;
  std::vector<Block> iv_;
  std::int64_t best_ = 0;
  LeafOrder best_order_;
  FptProgress stats_;
  std::int64_t triples_ = 0, reoriented_ = 0, cyclic_ = 0, mismatches_ = 0;
};

}  // namespace detail

/// Minimum crossings by enumerating the decisions of the undecided pairs.
/// Refuses instances with more than k_cap undecided pairs.
inline FptResult solve_fpt(const Geophylogeny& g, LeaderType type, const FptOptions& options = {}) {
  detail::FptSearch s(g, type, options);
  return s.run();
}

}  // namespace geophylo
