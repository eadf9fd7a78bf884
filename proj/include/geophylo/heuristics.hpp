#pragma once

#include <cctype>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "geophylo/crossings.hpp"
#include "geophylo/error.hpp"
#include "geophylo/internal_dp.hpp"
#include "geophylo/pairs.hpp"

namespace geophylo {

namespace detail {

inline std::int64_t recount(const PairAnalysis& pa, const LeafOrder& order) {
  std::int64_t total = 0;
  for (int i = 0; i < pa.n(); ++i)
    for (int j = i + 1; j < pa.n(); ++j) total += pa.cross(i, order.position(i), j, order.position(j)) ? 1 : 0;
  return total;
}

}  // namespace detail

/// Bottom-up DP: H(v, i) = min over child orders of H(x, i) + H(y, i + n(x)) +
/// C(x, y, i), where C counts crossings between the stored orders of the two
/// children only.
inline Solution bottom_up(const Geophylogeny& g, LeaderType type, const PairAnalysis* shared = nullptr) {
  std::unique_ptr<PairAnalysis> own;
  if (!shared) own = std::make_unique<PairAnalysis>(g, type);
  const PairAnalysis& pa = shared ? *shared : *own;
  const PhyloTree& t = g.tree();
  const int n = g.n();
  std::vector<std::vector<std::int64_t>> h(t.vertex_count());
  std::vector<std::vector<std::uint8_t>> choice(t.vertex_count());
  std::vector<int> pos(n, 0);

  // writes the stored order of T(v) starting at position i into pos
  auto place = [&](auto&& self, VertexId v, int i) -> void {
    if (t.is_leaf(v)) {
      pos[v] = i;
      return;
    }
    bool rot = choice[v][i - 1];
    VertexId first = rot ? t.right(v) : t.left(v);
    VertexId second = rot ? t.left(v) : t.right(v);
    self(self, first, i);
    self(self, second, i + t.size(first));
  };
  auto clade = [&](VertexId v) {
    return std::pair{t.first_leaf(v), t.first_leaf(v) + t.size(v)};
  };

  for (VertexId v : t.postorder()) {
    const int slots = n - t.size(v) + 1;
    h[v].assign(slots, 0);
    if (t.is_leaf(v)) continue;
    choice[v].assign(slots, 0);
    for (int i = 1; i <= slots; ++i) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (int rot = 0; rot <= 1; ++rot) {
        VertexId first = rot ? t.right(v) : t.left(v);
        VertexId second = rot ? t.left(v) : t.right(v);
        const int i2 = i + t.size(first);
        place(place, first, i);
        place(place, second, i2);
        std::int64_t c = h[first][i - 1] + h[second][i2 - 1];
        auto [a0, a1] = clade(first);
        auto [b0, b1] = clade(second);
        for (LeafId a = a0; a < a1; ++a)
          for (LeafId b = b0; b < b1; ++b) c += pa.cross(a, pos[a], b, pos[b]) ? 1 : 0;
        if (c < best) {
          best = c;
          choice[v][i - 1] = static_cast<std::uint8_t>(rot);
        }
      }
      h[v][i - 1] = best;
    }
  }
  std::vector<std::uint8_t> rot(t.internal_count(), 0);
  std::vector<std::pair<VertexId, int>> stack{{t.root(), 1}};
  while (!stack.empty()) {
    auto [v, i] = stack.back();
    stack.pop_back();
    if (t.is_leaf(v)) continue;
    bool r = choice[v][i - 1];
    rot[t.internal_index(v)] = r;
    VertexId first = r ? t.right(v) : t.left(v);
    VertexId second = r ? t.left(v) : t.right(v);
    stack.push_back({first, i});
    stack.push_back({second, i + t.size(first)});
  }
  LeafOrder order = LeafOrder::from_rotations(t, std::move(rot));
  return {order, detail::recount(pa, order), false};
}

/// Number of leaders of T(v) crossing the vertical line between its two child
/// blocks, for the children placed as (first, second) from position start.
/// A leader touching the line counts as crossing it.
inline int split_line_crossings(const Geophylogeny& g, VertexId first, VertexId second, int start) {
  const PhyloTree& t = g.tree();
  const int boundary = start + t.size(first) - 1;
  // line at (X(boundary) + X(boundary + 1)) / 2; compare doubled coordinates
  const Wide line2 = Wide(g.X(boundary)) + g.X(boundary + 1);
  int count = 0;
  for (LeafId l = t.first_leaf(first); l < t.first_leaf(first) + t.size(first); ++l)
    count += Wide(2) * g.site(l).x >= line2 ? 1 : 0;
  for (LeafId l = t.first_leaf(second); l < t.first_leaf(second) + t.size(second); ++l)
    count += Wide(2) * g.site(l).x <= line2 ? 1 : 0;
  return count;
}

/// Top-down: in pre-order, pick the rotation whose split line is crossed by
/// fewer leaders of the subtree; ties keep the neutral rotation.
inline Solution top_down(const Geophylogeny& g, LeaderType type, const PairAnalysis* shared = nullptr) {
  const PhyloTree& t = g.tree();
  std::vector<std::uint8_t> rot(t.internal_count(), 0);
  std::vector<int> start(t.vertex_count(), 1);
  for (VertexId v : t.preorder()) {
    if (t.is_leaf(v)) continue;
    int keep = split_line_crossings(g, t.left(v), t.right(v), start[v]);
    int turn = split_line_crossings(g, t.right(v), t.left(v), start[v]);
    bool r = turn < keep;
    rot[t.internal_index(v)] = r;
    VertexId first = r ? t.right(v) : t.left(v);
    VertexId second = r ? t.left(v) : t.right(v);
    start[first] = start[v];
    start[second] = start[v] + t.size(first);
  }
  LeafOrder order = LeafOrder::from_rotations(t, std::move(rot));
  std::int64_t c = shared ? detail::recount(*shared, order) : count_crossings(g, order, type);
  return {order, c, false};
}

/// Optimizes a leaf-additive measure and recounts the crossings of its order.
inline Solution leaf_additive(const Geophylogeny& g, LeaderType type, std::string_view measure = "xhop",
                              const PairAnalysis* shared = nullptr) {
  LeafOrder order = optimize_internal(g, builtin_measure(g, measure)).order;
  std::int64_t c = shared ? detail::recount(*shared, order) : count_crossings(g, order, type);
  return {order, c, false};
}

struct GreedyResult : Solution {
  int rotations_applied = 0;
};

/// First-improvement hill climbing over single rotations, scanning internal
/// vertices in pre-order until a full pass brings no improvement.
inline GreedyResult greedy(const Geophylogeny& g, LeaderType type, const LeafOrder& start,
                           const PairAnalysis* shared = nullptr) {
  std::unique_ptr<PairAnalysis> own;
  if (!shared) own = std::make_unique<PairAnalysis>(g, type);
  const PairAnalysis& pa = shared ? *shared : *own;
  const PhyloTree& t = g.tree();
  const int n = g.n();
  GreedyResult res;
  res.order = start;
  res.crossings = detail::recount(pa, start);
  res.optimal = false;
  std::vector<int> pos(n), moved(n);
  for (LeafId l = 0; l < n; ++l) pos[l] = start.position(l);
  std::vector<std::uint8_t> rot = start.rotations();
  bool improved = true;
  while (improved) {
    improved = false;
    for (VertexId v : t.preorder()) {
      if (t.is_leaf(v)) continue;
      // positions after rotating v: the two child blocks swap
      const LeafId lo = t.first_leaf(v), hi = lo + t.size(v);
      int block = n + 1;
      for (LeafId l = lo; l < hi; ++l) block = std::min(block, pos[l]);
      const VertexId l_child = t.left(v), r_child = t.right(v);
      const bool r = rot[t.internal_index(v)];
      const int n_first = t.size(r ? r_child : l_child);
      const int n_second = t.size(r ? l_child : r_child);
      for (LeafId l = 0; l < n; ++l) moved[l] = pos[l];
      for (LeafId l = lo; l < hi; ++l)
        moved[l] = pos[l] < block + n_first ? pos[l] + n_second : pos[l] - n_first;
      std::int64_t delta = 0;
      for (LeafId a = lo; a < hi; ++a)
        for (LeafId b = 0; b < n; ++b) {
          if (b == a || (b >= lo && b < hi && b < a)) continue;
          delta += (pa.cross(a, moved[a], b, moved[b]) ? 1 : 0) - (pa.cross(a, pos[a], b, pos[b]) ? 1 : 0);
        }
      if (delta < 0) {
        pos = moved;
        rot[t.internal_index(v)] ^= 1;
        res.crossings += delta;
        ++res.rotations_applied;
        improved = true;
      }
    }
  }
  res.order = LeafOrder::from_rotations(t, std::move(rot));
  return res;
}

/// Heuristic pipelines, e.g. "best(bu,td,la:xhop)+greedy".
///
///   spec  := stage ('+' 'greedy')*
///   stage := 'best(' spec (',' spec)* ')' | 'bu' | 'td' | 'la:' measure | 'greedy'
///
/// A bare "greedy" stage starts from the neutral order. Among equal counts the
/// earlier alternative wins.
class Pipeline {
 public:
  static Pipeline parse(std::string_view spec) {
    Pipeline p;
    std::string s;
    for (char c : spec)
      if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    std::size_t pos = 0;
    p.root_ = parse_spec(s, pos);
    if (pos != s.size()) fail(ErrorKind::kInvalidInput, "malformed heuristic pipeline '" + std::string(spec) + "'");
    p.text_ = s;
    return p;
  }

  Solution run(const Geophylogeny& g, LeaderType type) const {
    PairAnalysis pa(g, type);
    return eval(*root_, g, type, pa);
  }
  Solution run(const Geophylogeny& g, LeaderType type, const PairAnalysis& pa) const {
    return eval(*root_, g, type, pa);
  }
  const std::string& text() const { return text_; }

 private:
  struct Node {
    std::string op;  // "bu", "td", "la", "greedy", "best"
    std::string measure;
    std::vector<std::shared_ptr<Node>> kids;
    int greedy_after = 0;
  };

  static std::shared_ptr<Node> parse_spec(const std::string& s, std::size_t& pos) {
    auto node = parse_stage(s, pos);
    while (s.compare(pos, 7, "+greedy") == 0) {
      pos += 7;
      ++node->greedy_after;
    }
    return node;
  }

  static std::shared_ptr<Node> parse_stage(const std::string& s, std::size_t& pos) {
    auto node = std::make_shared<Node>();
    auto bad = [&] { fail(ErrorKind::kInvalidInput, "malformed heuristic pipeline '" + s + "'"); };
    if (s.compare(pos, 5, "best(") == 0) {
      pos += 5;
      node->op = "best";
      node->kids.push_back(parse_spec(s, pos));
      while (pos < s.size() && s[pos] == ',') {
        ++pos;
        node->kids.push_back(parse_spec(s, pos));
      }
      if (pos >= s.size() || s[pos] != ')') bad();
      ++pos;
      return node;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != ',' && s[end] != ')' && s[end] != '+') ++end;
    std::string word = s.substr(pos, end - pos);
    pos = end;
    if (word == "bu" || word == "td" || word == "greedy") {
      node->op = word;
    } else if (word.rfind("la:", 0) == 0 && word.size() > 3) {
      node->op = "la";
      node->measure = word.substr(3);
      if (node->measure != "xhop" && node->measure != "xoffset" && node->measure != "sumdist") bad();
    } else {
      bad();
    }
    return node;
  }

  static Solution eval(const Node& node, const Geophylogeny& g, LeaderType type, const PairAnalysis& pa) {
    Solution s;
    if (node.op == "bu") {
      s = bottom_up(g, type, &pa);
    } else if (node.op == "td") {
      s = top_down(g, type, &pa);
    } else if (node.op == "la") {
      s = leaf_additive(g, type, node.measure, &pa);
    } else if (node.op == "greedy") {
      s = greedy(g, type, LeafOrder::neutral(g.tree()), &pa);
    } else {
      bool have = false;
      for (const auto& kid : node.kids) {
        Solution k = eval(*kid, g, type, pa);
        if (!have || k.crossings < s.crossings) s = k;
        have = true;
      }
    }
    for (int r = 0; r < node.greedy_after; ++r) s = greedy(g, type, s.order, &pa);
    s.optimal = false;
    return s;
  }

  std::shared_ptr<Node> root_;
  std::string text_;
};

inline constexpr std::string_view kDefaultPipeline = "best(bu,td,la:xhop)+greedy";

}  // namespace geophylo
