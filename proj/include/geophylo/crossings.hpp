#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geophylo/error.hpp"
#include "geophylo/geometry.hpp"
#include "geophylo/geophylogeny.hpp"
#include "geophylo/leaf_order.hpp"

namespace geophylo {

enum class LeaderType { kS, kPO };

inline std::string_view to_string(LeaderType t) { return t == LeaderType::kS ? "s" : "po"; }
inline LeaderType parse_leader_type(std::string_view s) {
  if (s == "s" || s == "S") return LeaderType::kS;
  if (s == "po" || s == "PO") return LeaderType::kPO;
  fail(ErrorKind::kInvalidInput, "unknown leader type '" + std::string(s) + "'");
}

/// A leader from a site to the anchor of its leaf. PO leaders bend at
/// (anchor.x, site.y).
struct Leader {
  LeaderType type = LeaderType::kS;
  Point site;
  Point anchor;

  Point bend() const { return {anchor.x, site.y}; }
};

inline Leader make_leader(const Geophylogeny& g, const LeafOrder& order, LeafId leaf, LeaderType type) {
  return {type, g.site(leaf), g.anchor(order.position(leaf))};
}

/// True iff the two leaders share a point (site endpoints included).
inline bool crossing_pair(const Leader& a, const Leader& b) {
  if (a.type == LeaderType::kS) return intersects({a.site, a.anchor}, {b.site, b.anchor});
  Segment ah{a.site, a.bend()}, av{a.bend(), a.anchor};
  Segment bh{b.site, b.bend()}, bv{b.bend(), b.anchor};
  return intersects(ah, bh) || intersects(ah, bv) || intersects(av, bh) || intersects(av, bv);
}

/// Whether the leaders of leaves i and j cross when placed at positions pi and pj.
inline bool leaders_cross(const Geophylogeny& g, LeaderType type, LeafId i, int pi, LeafId j, int pj) {
  return crossing_pair({type, g.site(i), g.anchor(pi)}, {type, g.site(j), g.anchor(pj)});
}

inline std::int64_t count_crossings(const Geophylogeny& g, const LeafOrder& order, LeaderType type) {
  const int n = g.n();
  if (order.size() != n) fail(ErrorKind::kInvalidInput, "leaf order does not match the tree");
  std::vector<Leader> leaders;
  leaders.reserve(n);
  for (LeafId i = 0; i < n; ++i) leaders.push_back(make_leader(g, order, i, type));
  std::int64_t total = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) total += crossing_pair(leaders[i], leaders[j]) ? 1 : 0;
  return total;
}

/// Crossing status of every (leaf, position) pair combination. n^4 bytes.
class CrossTable {
 public:
  static constexpr int kMaxLeaves = 64;

  CrossTable(const Geophylogeny& g, LeaderType type) : n_(g.n()) {
    if (n_ > kMaxLeaves) fail(ErrorKind::kCapExceeded, "cross table limited to " + std::to_string(kMaxLeaves) + " leaves");
    table_.assign(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        for (int pi = 1; pi <= n_; ++pi)
          for (int pj = 1; pj <= n_; ++pj) {
            if (pi == pj) continue;
            std::uint8_t c = leaders_cross(g, type, i, pi, j, pj) ? 1 : 0;
            table_[index(i, pi, j, pj)] = c;
            table_[index(j, pj, i, pi)] = c;
          }
  }

  bool cross(LeafId i, int pi, LeafId j, int pj) const { return table_[index(i, pi, j, pj)] != 0; }

  std::int64_t count(const LeafOrder& order) const {
    std::int64_t total = 0;
    for (int i = 0; i < n_; ++i) {
      int pi = order.position(i);
      for (int j = i + 1; j < n_; ++j) total += table_[index(i, pi, j, order.position(j))];
    }
    return total;
  }

 private:
  std::size_t index(int i, int pi, int j, int pj) const {
    return ((static_cast<std::size_t>(i) * n_ + (pi - 1)) * n_ + j) * n_ + (pj - 1);
  }
  int n_;
  std::vector<std::uint8_t> table_;
};

/// Ordered-pair classification: undecided(i, j) iff p_j lies in the closed
/// s-area (triangle p_i, anchor 1, anchor n) or po-area (rectangle over the
/// position span from y(p_i) up) of p_i.
class PairClasses {
 public:
  PairClasses() = default;
  PairClasses(const Geophylogeny& g, LeaderType type) : n_(g.n()), type_(type), und_(static_cast<std::size_t>(n_) * n_, 0) {
    if (n_ < 2) return;
    Point a1 = g.anchor(1), an = g.anchor(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        if (i == j) continue;
        const Point& pi = g.site(i);
        const Point& pj = g.site(j);
        bool u = type == LeaderType::kS ? in_triangle(pi, a1, an, pj) : (a1.x <= pj.x && pj.x <= an.x && pj.y >= pi.y);
        if (u) {
          und_[static_cast<std::size_t>(i) * n_ + j] = 1;
          pairs_.emplace_back(i, j);
        }
      }
  }

  int n() const { return n_; }
  LeaderType type() const { return type_; }
  bool undecided(LeafId i, LeafId j) const { return und_[static_cast<std::size_t>(i) * n_ + j] != 0; }
  bool geometry_free(LeafId i, LeafId j) const { return !undecided(i, j) && !undecided(j, i); }
  /// Number of undecided ordered pairs.
  int k() const { return static_cast<int>(pairs_.size()); }
  const std::vector<std::pair<LeafId, LeafId>>& undecided_pairs() const { return pairs_; }

 private:
  int n_ = 0;
  LeaderType type_ = LeaderType::kS;
  std::vector<std::uint8_t> und_;
  std::vector<std::pair<LeafId, LeafId>> pairs_;
};

inline PairClasses classify_pairs(const Geophylogeny& g, LeaderType type) { return PairClasses(g, type); }

/// Total order of the sites under which every geometry-free pair crosses
/// exactly when its leaves appear in the opposite order.
///
/// S: angular order seen from anchor 1 (sites on the top line left of it
/// first, those at or right of it last). Plain x-order is not enough once a
/// site lies outside the position span. PO: sites left of the span by
/// decreasing y, then sites inside it, then sites right of it by increasing y.
/// Ties fall back to x, y, index.
inline bool view_before(const Geophylogeny& g, LeaderType type, LeafId a, LeafId b) {
  const Point& pa = g.site(a);
  const Point& pb = g.site(b);
  auto fallback = [&] {
    if (pa.x != pb.x) return pa.x < pb.x;
    if (pa.y != pb.y) return pa.y < pb.y;
    return a < b;
  };
  if (type == LeaderType::kS) {
    const Point c = g.anchor(1);
    auto cls = [&](const Point& p) { return p.y < g.ytop() ? 1 : (p.x < c.x ? 0 : 2); };
    int ca = cls(pa), cb = cls(pb);
    if (ca != cb) return ca < cb;
    if (ca == 1) {
      int o = orient(c, pa, pb);
      if (o != 0) return o > 0;
    }
    return fallback();
  }
  const Coord x1 = g.X(1), xn = g.X(g.n());
  auto cls = [&](const Point& p) { return p.x < x1 ? 0 : (p.x > xn ? 2 : 1); };
  int ca = cls(pa), cb = cls(pb);
  if (ca != cb) return ca < cb;
  if (ca == 0 && pa.y != pb.y) return pa.y > pb.y;
  if (ca == 2 && pa.y != pb.y) return pa.y < pb.y;
  return fallback();
}

inline std::vector<LeafId> geometry_free_order(const Geophylogeny& g, LeaderType type) {
  std::vector<LeafId> out(g.n());
  for (int i = 0; i < g.n(); ++i) out[i] = i;
  std::sort(out.begin(), out.end(), [&](LeafId a, LeafId b) { return view_before(g, type, a, b); });
  return out;
}

struct Solution {
  LeafOrder order;
  std::int64_t crossings = 0;
  bool optimal = true;
};

inline constexpr int kDefaultEnumerationCap = 16;
inline constexpr int kDefaultBruteForceCap = 14;

/// Calls fn on all 2^(n-1) realizable orders, in lexicographic order of
/// their rotation vectors.
inline void for_each_realizable_order(const PhyloTree& tree, const std::function<void(const LeafOrder&)>& fn,
                                      int cap = kDefaultEnumerationCap) {
  const int n = tree.leaf_count();
  if (n > cap)
    fail(ErrorKind::kCapExceeded,
         "enumeration refused: " + std::to_string(n) + " leaves exceeds the cap of " + std::to_string(cap));
  const int m = n - 1;
  const std::uint64_t total = std::uint64_t{1} << m;
  std::vector<std::uint8_t> rot(m, 0);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int k = 0; k < m; ++k) rot[k] = (mask >> (m - 1 - k)) & 1;
    fn(LeafOrder::from_rotations(tree, rot));
  }
}

inline std::vector<LeafOrder> realizable_orders(const PhyloTree& tree, int cap = kDefaultEnumerationCap) {
  std::vector<LeafOrder> out;
  for_each_realizable_order(tree, [&](const LeafOrder& o) { out.push_back(o); }, cap);
  return out;
}

/// Exhaustive minimum; ties go to the lexicographically smallest rotation vector.
inline Solution brute_force_min(const Geophylogeny& g, LeaderType type, int cap = kDefaultBruteForceCap) {
  if (g.n() > cap)
    fail(ErrorKind::kCapExceeded,
         "brute force refused: " + std::to_string(g.n()) + " leaves exceeds the cap of " + std::to_string(cap));
  CrossTable table(g, type);
  Solution best;
  bool have = false;
  for_each_realizable_order(
      g.tree(),
      [&](const LeafOrder& o) {
        std::int64_t c = table.count(o);
        if (!have || c < best.crossings) {
          best = {o, c, true};
          have = true;
        }
      },
      cap);
  return best;
}

}  // namespace geophylo
