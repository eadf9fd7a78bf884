#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "geophylo/crossings.hpp"
#include "geophylo/error.hpp"
#include "geophylo/leaf_order.hpp"
#include "geophylo/pairs.hpp"
#include "geophylo/tree.hpp"

namespace geophylo {

/// One-sided tanglegram: a fixed sequence of sites against the variable tree,
/// with an allowed position interval per leaf.
struct Tanglegram {
  const PhyloTree* tree = nullptr;
  std::vector<LeafId> fixed;    // site (leaf id) sequence, left to right
  std::vector<Block> allowed;   // per leaf; empty means [1, n] everywhere
  std::int64_t credit = 0;      // crossings added to the DP value

  Tanglegram() = default;
  Tanglegram(const PhyloTree& t, std::vector<LeafId> order) : tree(&t), fixed(std::move(order)) {}
};

struct TanglegramResult {
  LeafOrder order;
  std::int64_t crossings = 0;  // inversions against the fixed side plus credit
};

namespace detail {

inline constexpr std::int64_t kDpInf = std::numeric_limits<std::int64_t>::max() / 4;

/// Minimizes the sum of cost(a, b) over leaf pairs split at their lowest
/// common ancestor, where a ends up left of b, subject to per-leaf position
/// intervals. cost must not depend on absolute positions; the intervals only
/// restrict the leaf cells. Ties keep the neutral child order.
template <typename Cost>
std::optional<std::pair<LeafOrder, std::int64_t>> pairwise_dp(const PhyloTree& t, const std::vector<Block>& allowed,
                                                              Cost&& cost) {
  const int n = t.leaf_count();
  std::vector<std::array<std::int64_t, 2>> cr(t.vertex_count(), {0, 0});
  for (VertexId v : t.postorder()) {
    if (t.is_leaf(v)) continue;
    const VertexId x = t.left(v), y = t.right(v);
    std::int64_t keep = 0, swap = 0;
    for (LeafId a = t.first_leaf(x); a < t.first_leaf(x) + t.size(x); ++a)
      for (LeafId b = t.first_leaf(y); b < t.first_leaf(y) + t.size(y); ++b) {
        keep += cost(a, b);
        swap += cost(b, a);
      }
    cr[v] = {keep, swap};
  }
  std::vector<std::vector<std::int64_t>> f(t.vertex_count());
  std::vector<std::vector<std::uint8_t>> pick(t.vertex_count());
  for (VertexId v : t.postorder()) {
    const int slots = n - t.size(v) + 1;
    f[v].assign(slots, kDpInf);
    if (t.is_leaf(v)) {
      for (int i = 1; i <= slots; ++i) {
        const bool ok = allowed.empty() || (allowed[v].lo <= i && i <= allowed[v].hi);
        f[v][i - 1] = ok ? 0 : kDpInf;
      }
      continue;
    }
    pick[v].assign(slots, 0);
    const VertexId x = t.left(v), y = t.right(v);
    const int nx = t.size(x), ny = t.size(y);
    for (int i = 1; i <= slots; ++i) {
      const std::int64_t a = f[x][i - 1], b = f[y][i + nx - 1];
      const std::int64_t c = f[y][i - 1], d = f[x][i + ny - 1];
      std::int64_t keep = a < kDpInf && b < kDpInf ? a + b + cr[v][0] : kDpInf;
      std::int64_t swap = c < kDpInf && d < kDpInf ? c + d + cr[v][1] : kDpInf;
      f[v][i - 1] = std::min(keep, swap);
      pick[v][i - 1] = swap < keep ? 1 : 0;
    }
  }
  const VertexId root = t.root();
  if (f[root][0] >= kDpInf) return std::nullopt;
  std::vector<std::uint8_t> rot(t.internal_count(), 0);
  std::vector<std::pair<VertexId, int>> stack{{root, 1}};
  while (!stack.empty()) {
    auto [v, i] = stack.back();
    stack.pop_back();
    if (t.is_leaf(v)) continue;
    const int r = pick[v][i - 1];
    rot[t.internal_index(v)] = static_cast<std::uint8_t>(r);
    VertexId first = r ? t.right(v) : t.left(v), second = r ? t.left(v) : t.right(v);
    stack.push_back({first, i});
    stack.push_back({second, i + t.size(first)});
  }
  return std::pair{LeafOrder::from_rotations(t, std::move(rot)), f[root][0]};
}

}  // namespace detail

/// Minimum number of connection crossings over the admissible leaf orders.
inline TanglegramResult solve_tanglegram(const Tanglegram& tg) {
  if (tg.tree == nullptr) fail(ErrorKind::kInvalidInput, "tanglegram without a tree");
  const PhyloTree& t = *tg.tree;
  const int n = t.leaf_count();
  if (static_cast<int>(tg.fixed.size()) != n) fail(ErrorKind::kInvalidInput, "fixed side is not a permutation of the sites");
  std::vector<int> rank(n, -1);
  for (int k = 0; k < n; ++k) {
    const LeafId s = tg.fixed[k];
    if (s < 0 || s >= n || rank[s] >= 0) fail(ErrorKind::kInvalidInput, "fixed side is not a permutation of the sites");
    rank[s] = k;
  }
  if (!tg.allowed.empty()) {
    if (static_cast<int>(tg.allowed.size()) != n) fail(ErrorKind::kInvalidInput, "one interval per leaf expected");
    for (LeafId l = 0; l < n; ++l)
      if (tg.allowed[l].lo > tg.allowed[l].hi)
        fail(ErrorKind::kInfeasible, "empty position interval for leaf " + t.label(l));
  }
  auto res = detail::pairwise_dp(t, tg.allowed, [&](LeafId a, LeafId b) { return rank[a] > rank[b] ? 1 : 0; });
  if (!res) fail(ErrorKind::kInfeasible, "position intervals admit no leaf order");
  return {std::move(res->first), res->second + tg.credit};
}

struct GeometryFreeResult : Solution {
  std::int64_t tanglegram_crossings = 0;
};

/// Optimum for an instance without undecided pairs, via the tanglegram whose
/// fixed side is the order in which geometry-free pairs do not cross. Pairs
/// outside general position that cross in both orders (or in neither) are
/// charged their constant instead of an inversion.
inline GeometryFreeResult solve_geometry_free(const Geophylogeny& g, LeaderType type) {
  const int k = classify_pairs(g, type).k();
  if (k > 0)
    fail(ErrorKind::kPrecondition, "instance is not geometry-free (k = " + std::to_string(k) +
                                       " undecided pairs); use the FPT or exact solver");
  const int n = g.n();
  PairAnalysis pa(g, type);
  std::vector<LeafId> fixed = geometry_free_order(g, type);
  std::vector<int> rank(n);
  for (int i = 0; i < n; ++i) rank[fixed[i]] = i;
  auto cost = [&](LeafId a, LeafId b) -> std::int64_t {
    const PairInfo& f = pa.info(a, b);
    if (f.kind == PairKind::kOrder && f.cross_small_left == f.cross_small_right) return f.cross_small_left ? 1 : 0;
    return rank[a] > rank[b] ? 1 : 0;
  };
  auto dp = detail::pairwise_dp(g.tree(), {}, cost);
  GeometryFreeResult res;
  res.order = std::move(dp->first);
  res.tanglegram_crossings = dp->second;
  res.crossings = count_crossings(g, res.order, type);
  res.optimal = true;
  return res;
}

}  // namespace geophylo
