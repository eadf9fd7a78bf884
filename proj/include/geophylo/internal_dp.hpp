#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "geophylo/constraints.hpp"
#include "geophylo/error.hpp"
#include "geophylo/geophylogeny.hpp"
#include "geophylo/leaf_order.hpp"

namespace geophylo {

enum class Direction { kMinimize, kMaximize };

/// Leaf-additive quality measure: total cost is the sum of cost(leaf, position).
/// unit converts the cost type into map units for reporting.
template <class Cost>
struct Measure {
  std::string name;
  Direction direction = Direction::kMinimize;
  std::function<Cost(LeafId leaf, int position)> cost;
  double unit = 1.0;
};

using IntMeasure = Measure<std::int64_t>;

/// Fixed-point resolution of the sum-dist measure: one cost unit is 1/1024 of
/// a frame unit, rounded to nearest. Both the DP and every evaluation use the
/// same rounded per-leaf values, so optima compare exactly.
inline constexpr long double kSumDistResolution = 1024.0L;

/// Ranks 1..n of the sites by x, ties by y, then index.
inline std::vector<int> x_ranks(const Geophylogeny& g) {
  std::vector<LeafId> ids(g.n());
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](LeafId a, LeafId b) {
    const Point &pa = g.site(a), &pb = g.site(b);
    if (pa.x != pb.x) return pa.x < pb.x;
    if (pa.y != pb.y) return pa.y < pb.y;
    return a < b;
  });
  std::vector<int> rank(g.n());
  for (int r = 0; r < g.n(); ++r) rank[ids[r]] = r + 1;
  return rank;
}

inline IntMeasure xhop_measure(const Geophylogeny& g) {
  auto rank = std::make_shared<std::vector<int>>(x_ranks(g));
  return {"xhop", Direction::kMinimize,
          [rank](LeafId leaf, int position) -> std::int64_t { return std::abs(position - (*rank)[leaf]); }, 1.0};
}

inline IntMeasure xoffset_measure(const Geophylogeny& g) {
  const Geophylogeny* gp = &g;
  return {"xoffset", Direction::kMinimize,
          [gp](LeafId leaf, int position) -> std::int64_t { return std::abs(gp->site(leaf).x - gp->X(position)); },
          1.0 / static_cast<double>(g.scale())};
}

inline IntMeasure sumdist_measure(const Geophylogeny& g) {
  const Geophylogeny* gp = &g;
  return {"sumdist", Direction::kMinimize,
          [gp](LeafId leaf, int position) -> std::int64_t {
            long double dx = static_cast<long double>(gp->site(leaf).x - gp->X(position));
            long double dy = static_cast<long double>(gp->site(leaf).y - gp->ytop());
            return std::llround(std::sqrt(dx * dx + dy * dy) * kSumDistResolution);
          },
          static_cast<double>(1.0L / (kSumDistResolution * static_cast<long double>(g.scale())))};
}

/// Built-in measures by name: "sumdist", "xoffset", "xhop". The returned
/// measure refers to g, which must outlive it.
inline IntMeasure builtin_measure(const Geophylogeny& g, std::string_view name) {
  if (name == "xhop") return xhop_measure(g);
  if (name == "xoffset") return xoffset_measure(g);
  if (name == "sumdist") return sumdist_measure(g);
  fail(ErrorKind::kInvalidInput, "unknown measure '" + std::string(name) + "'");
}

template <class Cost>
constexpr Cost infinite_cost() {
  if constexpr (std::numeric_limits<Cost>::has_infinity) return std::numeric_limits<Cost>::infinity();
  else return std::numeric_limits<Cost>::max();
}

template <class Cost>
constexpr Cost saturating_add(Cost a, Cost b) {
  constexpr Cost inf = infinite_cost<Cost>();
  if (a == inf || b == inf) return inf;
  if constexpr (std::is_integral_v<Cost>) {
    if (a > 0 && b > inf - a) return inf;
  }
  return a + b;
}

template <class Cost>
Cost measure_cost(const Measure<Cost>& m, const LeafOrder& order) {
  Cost total{};
  for (LeafId leaf = 0; leaf < order.size(); ++leaf) total += m.cost(leaf, order.position(leaf));
  return total;
}

/// Sum of f over all leaves, in map units.
template <class Cost>
double measure_value(const Measure<Cost>& m, const LeafOrder& order) {
  return static_cast<double>(measure_cost(m, order)) * m.unit;
}

/// DP table F(v, i) over (vertex, leftmost position); i runs 1..n-n(v)+1.
template <class Cost>
class InternalTable {
 public:
  InternalTable(const Geophylogeny& g, const Measure<Cost>& m, const Constraints& c) : tree_(&g.tree()) {
    const PhyloTree& t = g.tree();
    const int n = t.leaf_count();
    const bool maximize = m.direction == Direction::kMaximize;
    table_.resize(t.vertex_count());
    choice_.resize(t.vertex_count());
    constexpr Cost inf = infinite_cost<Cost>();
    for (VertexId v : t.postorder()) {
      const int slots = n - t.size(v) + 1;
      auto& row = table_[v];
      row.assign(slots, inf);
      if (t.is_leaf(v)) {
        for (int i = 1; i <= slots; ++i) {
          if (!c.allows(v, i)) continue;
          Cost f = m.cost(v, i);
          row[i - 1] = maximize ? -f : f;
        }
      } else {
        choice_[v].assign(slots, 0);
        const int fixed = c.rotation(v);
        for (int i = 1; i <= slots; ++i) {
          for (int rot = 0; rot <= 1; ++rot) {
            if (fixed >= 0 && fixed != rot) continue;
            VertexId first = rot ? t.right(v) : t.left(v);
            VertexId second = rot ? t.left(v) : t.right(v);
            Cost val = saturating_add(table_[first][i - 1], table_[second][i + t.size(first) - 1]);
            // strict comparison keeps the neutral rotation on ties
            if (val < row[i - 1]) {
              row[i - 1] = val;
              choice_[v][i - 1] = static_cast<std::uint8_t>(rot);
            }
          }
        }
      }
      bool any = false;
      for (Cost x : row) any = any || x != inf;
      if (!any) {
        fail(ErrorKind::kInfeasible, "constraints are infeasible: no admissible placement for vertex " +
                                         std::to_string(v) + " (" + LeafOrder::describe_clade(t, v) + ")");
      }
    }
    sign_ = maximize ? -1 : 1;
  }

  /// F(v, i) in the measure's cost type; infinite_cost() if prohibited.
  Cost value(VertexId v, int i) const {
    Cost x = table_[v][i - 1];
    return x == infinite_cost<Cost>() ? x : (sign_ < 0 ? -x : x);
  }
  int slots(VertexId v) const { return static_cast<int>(table_[v].size()); }

  LeafOrder backtrack() const {
    const PhyloTree& t = *tree_;
    std::vector<std::uint8_t> rot(t.internal_count(), 0);
    std::vector<std::pair<VertexId, int>> stack{{t.root(), 1}};
    while (!stack.empty()) {
      auto [v, i] = stack.back();
      stack.pop_back();
      if (t.is_leaf(v)) continue;
      std::uint8_t r = choice_[v][i - 1];
      rot[t.internal_index(v)] = r;
      VertexId first = r ? t.right(v) : t.left(v);
      VertexId second = r ? t.left(v) : t.right(v);
      stack.push_back({first, i});
      stack.push_back({second, i + t.size(first)});
    }
    return LeafOrder::from_rotations(t, std::move(rot));
  }

 private:
  const PhyloTree* tree_;
  std::vector<std::vector<Cost>> table_;
  std::vector<std::vector<std::uint8_t>> choice_;
  int sign_ = 1;
};

template <class Cost>
struct InternalResult {
  LeafOrder order;
  Cost cost{};
  double value = 0.0;
};

/// Optimal leaf order for a leaf-additive measure under constraints, O(n^2)
/// evaluations of f.
template <class Cost>
InternalResult<Cost> optimize_internal(const Geophylogeny& g, const Measure<Cost>& m, const Constraints& c = {}) {
  InternalTable<Cost> table(g, m, c);
  InternalResult<Cost> out;
  out.order = table.backtrack();
  out.cost = table.value(g.tree().root(), 1);
  out.value = static_cast<double>(out.cost) * m.unit;
  return out;
}

}  // namespace geophylo
