#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "geophylo/crossings.hpp"
#include "geophylo/decimal.hpp"
#include "geophylo/error.hpp"
#include "geophylo/geophylogeny.hpp"
#include "geophylo/tree.hpp"

namespace geophylo {

/// Simple undirected graph on vertices 1..n with a cut target.
struct MaxCutInput {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;  // normalized to (i < j), lexicographic
  int c = 0;
};

/// Parses "u v" lines (1-based vertex ids, '#' starts a comment).
inline MaxCutInput parse_graph(std::string_view text, int c) {
  MaxCutInput in;
  in.c = c;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    int u, v;
    if (!(ls >> u)) continue;
    std::string rest;
    if (!(ls >> v) || (ls >> rest))
      fail(ErrorKind::kInvalidInput, "graph line " + std::to_string(lineno) + ": expected two vertex ids");
    in.edges.emplace_back(u, v);
    in.vertices = std::max({in.vertices, u, v});
  }
  return in;
}

/// Normalizes and validates: no loops or multi-edges, vertices 1..n all used
/// with degree at least 2, at least three edges.
inline MaxCutInput normalize(MaxCutInput in) {
  std::set<std::pair<int, int>> seen;
  std::vector<int> deg(static_cast<std::size_t>(std::max(in.vertices, 0)) + 1, 0);
  for (auto& [u, v] : in.edges) {
    if (u < 1 || v < 1 || u > in.vertices || v > in.vertices) fail(ErrorKind::kInvalidInput, "vertex id out of range");
    if (u == v) fail(ErrorKind::kInvalidInput, "self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second)
      fail(ErrorKind::kInvalidInput, "duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
    ++deg[u];
    ++deg[v];
  }
  if (in.edges.size() < 3) fail(ErrorKind::kInvalidInput, "graph needs at least three edges");
  for (int v = 1; v <= in.vertices; ++v)
    if (deg[v] < 2) fail(ErrorKind::kInvalidInput, "vertex " + std::to_string(v) + " has degree below 2");
  std::sort(in.edges.begin(), in.edges.end());
  if (in.c < 0) fail(ErrorKind::kInvalidInput, "cut target must be non-negative");
  return in;
}

/// Largest cut by exhaustion (vertex 1 fixed to one side).
inline int brute_force_maxcut(const MaxCutInput& in) {
  if (in.vertices > 24) fail(ErrorKind::kCapExceeded, "max-cut enumeration limited to 24 vertices");
  int best = 0;
  const std::uint32_t count = in.vertices > 0 ? 1u << (in.vertices - 1) : 1u;
  for (std::uint32_t s = 0; s < count; ++s) {
    int cut = 0;
    for (auto [u, v] : in.edges) {
      const bool su = u > 1 && ((s >> (u - 2)) & 1), sv = v > 1 && ((s >> (v - 2)) & 1);
      cut += su != sv;
    }
    best = std::max(best, cut);
  }
  return best;
}

struct MaxCutInstance {
  Geophylogeny geophylogeny;
  std::int64_t k_fix = 0;
  std::int64_t k_threshold = 0;
  int m = 0;
  int d = 0;
  int units = 0;  // fixing units per fixing gadget
};

/// Reduction instance: the optimum is at most k_threshold iff the graph has a
/// cut with at least c edges.
///
/// Every vertex v owns two subtrees with one leaf per incident edge, placed on
/// opposite sides of a central fixing gadget; the side of the first one is the
/// side of v in the cut. Edge e_h = (i, j) has four sites on the central axis:
/// at heights 2h-1, 2h for its leaves below i and j, and 4m-2h+1, 4m-2h+2 for
/// the leaves below i' and j'. Fixing gadgets sit between consecutive vertex
/// subtrees; each unit is a tree ((a, a'), (b, b')) with all four sites on its
/// designed centre, above every edge site, and costs two crossings once moved
/// by two or more positions. units < 0 selects max(1, m - c).
inline MaxCutInstance build_maxcut_instance(const MaxCutInput& raw, LeaderType type, int units = -1) {
  const MaxCutInput in = normalize(raw);
  const int nv = in.vertices;
  const int m = static_cast<int>(in.edges.size());
  const int d = type == LeaderType::kPO ? 4 : 4 * m * m;
  const int u = units >= 0 ? units : std::max(1, m - in.c);

  std::vector<std::vector<int>> incident(nv + 1);  // edge indices h (0-based), increasing
  for (int h = 0; h < m; ++h) {
    incident[in.edges[h].first].push_back(h);
    incident[in.edges[h].second].push_back(h);
  }
  auto leaf_label = [&](int h, int at, bool primed) {
    const auto [i, j] = in.edges[h];
    const int other = at == i ? j : i;
    return std::string(primed ? "y" : "x") + std::to_string(at) + "_" + std::to_string(other);
  };

  PhyloTree::Builder b;
  struct SiteSpec {
    std::string label;
    Decimal x;
    std::int64_t y;
  };
  std::vector<SiteSpec> sites;

  // neutral order: FL_n T(n) ... FL_1 T(1) F0 T(1') FR_1 ... T(n') FR_n
  const int fix_width = 4 * u;
  int total = fix_width;
  for (int v = 1; v <= nv; ++v) total += 2 * (static_cast<int>(incident[v].size()) + fix_width);
  const int left_extent = (total - fix_width) / 2;
  // central axis; doubled to stay on the decimal grid
  const std::int64_t axis2 = 2 * left_extent + fix_width + 1;
  auto half = [](std::int64_t doubled) { return Decimal::parse(std::to_string(doubled / 2) + (doubled % 2 ? ".5" : "")); };

  const std::int64_t low = 4LL * m + d;
  int gadget_id = 0;
  auto fixing_gadget = [&](int first_position) {
    const int g = gadget_id++;
    int top = -1;
    for (int k = 0; k < u; ++k) {
      const int p = first_position + 4 * k;
      const std::int64_t centre2 = 2 * p + 3;  // between the second and third leaf
      const std::string base = "f" + std::to_string(g) + "_" + std::to_string(k);
      const int a = b.leaf(base + "a"), a2 = b.leaf(base + "a2"), bb = b.leaf(base + "b"), b2 = b.leaf(base + "b2");
      sites.push_back({base + "a", half(centre2), low + 3});
      sites.push_back({base + "a2", half(centre2), low + 2});
      sites.push_back({base + "b", half(centre2), low + 4});
      sites.push_back({base + "b2", half(centre2), low + 1});
      const int unit = b.join(b.join(a2, a), b.join(bb, b2));
      top = top < 0 ? unit : b.join(top, unit);
    }
    return top;
  };
  auto vertex_subtree = [&](int v, bool primed) {
    int top = -1;
    for (int h : incident[v]) {
      const int leaf = b.leaf(leaf_label(h, v, primed));
      top = top < 0 ? leaf : b.join(top, leaf);
    }
    return top;
  };

  // positions of the neutral order, used to place the fixing units
  std::vector<int> fl_start(nv + 1), fr_start(nv + 1);
  int pos = 1;
  for (int v = nv; v >= 1; --v) {
    fl_start[v] = pos;
    pos += fix_width + static_cast<int>(incident[v].size());
  }
  const int centre_start = pos;
  pos += fix_width;
  for (int v = 1; v <= nv; ++v) {
    pos += static_cast<int>(incident[v].size());
    fr_start[v] = pos;
    pos += fix_width;
  }

  int w = u > 0 ? fixing_gadget(centre_start) : -1;
  for (int v = 1; v <= nv; ++v) {
    const int ti = vertex_subtree(v, false), tip = vertex_subtree(v, true);
    const int inner = w < 0 ? ti : b.join(ti, w);
    int vg = b.join(inner, tip);
    if (u > 0) {
      const int fl = fixing_gadget(fl_start[v]);
      const int fr = fixing_gadget(fr_start[v]);
      vg = b.join(b.join(fl, vg), fr);
    }
    w = vg;
  }
  PhyloTree tree = b.build(w);

  for (int h = 0; h < m; ++h) {
    const auto [i, j] = in.edges[h];
    const std::int64_t hh = h + 1;
    sites.push_back({leaf_label(h, i, false), half(axis2), 2 * hh - 1});
    sites.push_back({leaf_label(h, j, false), half(axis2), 2 * hh});
    sites.push_back({leaf_label(h, i, true), half(axis2), 4LL * m - 2 * (hh - 1) - 1});
    sites.push_back({leaf_label(h, j, true), half(axis2), 4LL * m - 2 * (hh - 1)});
  }
  const int n = tree.leaf_count();
  std::vector<Decimal> xs(n), ys(n);
  for (const SiteSpec& s : sites) {
    const LeafId l = *tree.find_leaf(s.label);
    xs[l] = s.x;
    ys[l] = Decimal::from_int(s.y);
  }
  const std::int64_t height = low + 5;
  MaxCutInstance out{Geophylogeny(std::move(tree), Decimal::from_int(total + 1), Decimal::from_int(height), std::move(xs),
                                  std::move(ys), Layout::identity(total, Decimal::from_int(height))),
                     0, 0, m, d, u};
  std::int64_t adjacent = 0, disjoint = 0;
  for (int e = 0; e < m; ++e)
    for (int f = e + 1; f < m; ++f) {
      const auto [a1, b1] = in.edges[e];
      const auto [a2, b2] = in.edges[f];
      (a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2) ? ++adjacent : ++disjoint;
    }
  out.k_fix = 3 * adjacent + 4 * disjoint;
  out.k_threshold = out.k_fix + 2LL * m - in.c;
  return out;
}

}  // namespace geophylo
