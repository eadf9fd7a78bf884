#pragma once

#include <cstdint>
#include <vector>

#include "geophylo/crossings.hpp"
#include "geophylo/geometry.hpp"
#include "geophylo/geophylogeny.hpp"

namespace geophylo {

/// How the crossing of a leader pair depends on the leaf positions.
enum class PairKind {
  kOrder,      // only the relative order of the two leaves matters
  kThreshold,  // q in the area of p and higher: p's side of x* matters as well
  kGeneral,    // degenerate configuration, evaluated geometrically
};

struct PairInfo {
  PairKind kind = PairKind::kGeneral;
  // kOrder: crossing when the leaf with the smaller id is left / right
  bool cross_small_left = false;
  bool cross_small_right = false;
  // kThreshold
  LeafId p = -1;
  LeafId q = -1;
  Wide xs_num = 0;  // x* = xs_num / xs_den, xs_den > 0
  Wide xs_den = 1;
  int lt = 0;        // number of positions with X < x*
  bool tie = false;  // X(lt + 1) == x*
};

/// Closed position interval.
struct Block {
  int lo;
  int hi;
};

/// Per-pair crossing structure. kThreshold pairs (p, q) cross iff the anchor of
/// p lies between x* and the anchor of q, both ends included: with d = 0
/// (p passes left of q) they cross iff q's leaf is left of p's.
class PairAnalysis {
 public:
  PairAnalysis() = default;
  PairAnalysis(const Geophylogeny& g, LeaderType type) : g_(&g), type_(type), n_(g.n()) {
    info_.resize(static_cast<std::size_t>(n_) * n_);
    PairClasses pc(g, type);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        PairInfo info = analyze(pc, i, j);
        info_[index(i, j)] = info;
        info_[index(j, i)] = info;
      }
  }

  const Geophylogeny& geophylogeny() const { return *g_; }
  LeaderType type() const { return type_; }
  int n() const { return n_; }
  const PairInfo& info(LeafId i, LeafId j) const { return info_[index(i, j)]; }

  /// Exact crossing status with i at position pi and j at position pj.
  bool cross(LeafId i, int pi, LeafId j, int pj) const {
    const PairInfo& f = info(i, j);
    switch (f.kind) {
      case PairKind::kOrder:
        return (i < j) == (pi < pj) ? f.cross_small_left : f.cross_small_right;
      case PairKind::kThreshold: {
        int a = f.p == i ? pi : pj;
        int b = f.p == i ? pj : pi;
        return threshold_cross(f, a, b);
      }
      case PairKind::kGeneral:
        break;
    }
    return leaders_cross(*g_, type_, i, pi, j, pj);
  }

  static bool threshold_cross(const PairInfo& f, int a, int b) {
    if (a <= f.lt) return b < a;
    if (f.tie && a == f.lt + 1) return true;
    return b > a;
  }

  /// Whether the pair crosses for every choice of positions in two disjoint blocks.
  bool forced(LeafId i, Block bi, LeafId j, Block bj) const {
    const PairInfo& f = info(i, j);
    const bool i_left = bi.hi < bj.lo;
    switch (f.kind) {
      case PairKind::kOrder:
        return (i < j) == i_left ? f.cross_small_left : f.cross_small_right;
      case PairKind::kThreshold: {
        Block bp = f.p == i ? bi : bj;
        bool q_left = (f.p == i) != i_left;
        return q_left ? bp.hi <= f.lt + (f.tie ? 1 : 0) : bp.lo >= f.lt + 1;
      }
      case PairKind::kGeneral:
        break;
    }
    if ((bi.hi - bi.lo + 1) * (bj.hi - bj.lo + 1) > 16) return false;
    for (int a = bi.lo; a <= bi.hi; ++a)
      for (int b = bj.lo; b <= bj.hi; ++b)
        if (!leaders_cross(*g_, type_, i, a, j, b)) return false;
    return true;
  }

  /// Number of positions with X < value/den, and whether one equals it.
  static std::pair<int, bool> rank_threshold(const Geophylogeny& g, Wide num, Wide den) {
    int lo = 0, hi = g.n();  // count of X(a) * den < num
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (Wide(g.X(mid + 1)) * den < num) lo = mid + 1;
      else hi = mid;
    }
    bool tie = lo < g.n() && Wide(g.X(lo + 1)) * den == num;
    return {lo, tie};
  }

 private:
  std::size_t index(LeafId i, LeafId j) const { return static_cast<std::size_t>(i) * n_ + j; }

  PairInfo analyze(const PairClasses& pc, LeafId i, LeafId j) const {
    const Geophylogeny& g = *g_;
    const Point &pi = g.site(i), &pj = g.site(j);
    PairInfo f;
    if (pi == pj) return f;
    const bool uij = pc.undecided(i, j), uji = pc.undecided(j, i);
    auto order_kind = [&] {
      f.kind = PairKind::kOrder;
      f.cross_small_left = leaders_cross(g, type_, i, 1, j, n_);
      f.cross_small_right = leaders_cross(g, type_, i, n_, j, 1);
      return f;
    };
    auto threshold_kind = [&](LeafId p, LeafId q) {
      const Point &pp = g.site(p), &pq = g.site(q);
      f.kind = PairKind::kThreshold;
      f.p = p;
      f.q = q;
      if (type_ == LeaderType::kS) {
        f.xs_den = Wide(pq.y) - pp.y;
        f.xs_num = Wide(pp.x) * f.xs_den + (Wide(pq.x) - pp.x) * (Wide(g.ytop()) - pp.y);
      } else {
        f.xs_den = 1;
        f.xs_num = pq.x;
      }
      auto [lt, tie] = rank_threshold(g, f.xs_num, f.xs_den);
      f.lt = lt;
      f.tie = tie;
      return f;
    };
    if (type_ == LeaderType::kS) {
      if (uij != uji) {
        LeafId p = uij ? i : j, q = uij ? j : i;
        if (g.site(q).y > g.site(p).y) return threshold_kind(p, q);
        return f;
      }
      if (!uij && pi.y < g.ytop() && pj.y < g.ytop()) return order_kind();
      return f;
    }
    if (pi.y != pj.y) {
      LeafId p = pi.y < pj.y ? i : j, q = pi.y < pj.y ? j : i;
      if (pc.undecided(p, q)) return threshold_kind(p, q);
      return order_kind();
    }
    const Coord x1 = g.X(1), xn = g.X(n_);
    if ((pi.x < x1 && pj.x < x1) || (pi.x > xn && pj.x > xn)) return order_kind();
    return f;
  }

  const Geophylogeny* g_ = nullptr;
  LeaderType type_ = LeaderType::kS;
  int n_ = 0;
  std::vector<PairInfo> info_;
};

}  // namespace geophylo
