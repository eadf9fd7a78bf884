#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "geophylo/crossings.hpp"
#include "geophylo/geometry.hpp"
#include "geophylo/geophylogeny.hpp"
#include "geophylo/tree.hpp"

namespace testing_support {

using geophylo::Decimal;
using geophylo::Geophylogeny;
using geophylo::Layout;
using geophylo::PhyloTree;

inline std::string trim(double v) {
  std::string s = std::to_string(v);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

inline Geophylogeny make_instance(const std::string& newick, const std::vector<std::pair<double, double>>& sites,
                                  Layout layout, int width, int height) {
  PhyloTree t = PhyloTree::from_newick(newick);
  std::vector<Decimal> xs(t.leaf_count()), ys(t.leaf_count());
  for (int i = 0; i < t.leaf_count(); ++i) {
    // labels are l1..ln; sites are given in label order
    int k = std::stoi(t.label(i).substr(1)) - 1;
    xs[i] = Decimal::parse(trim(sites[k].first));
    ys[i] = Decimal::parse(trim(sites[k].second));
  }
  return Geophylogeny(t, Decimal::from_int(width), Decimal::from_int(height), xs, ys, std::move(layout));
}

/// ((l1,l2),l3); X=(1,2,3); ytop=4; p1=(3,1), p2=(1,2), p3=(2,3).
inline Geophylogeny t3() {
  return make_instance("((l1,l2),l3);", {{3, 1}, {1, 2}, {2, 3}}, Layout::identity(3, Decimal::from_int(4)), 4, 4);
}

/// Random binary tree on labels l1..ln, built by random merges.
inline PhyloTree random_tree(std::mt19937_64& rng, int n) {
  PhyloTree::Builder b;
  std::vector<int> pool;
  for (int i = 1; i <= n; ++i) pool.push_back(b.leaf("l" + std::to_string(i)));
  while (pool.size() > 1) {
    std::size_t a = rng() % pool.size();
    int x = pool[a];
    pool.erase(pool.begin() + a);
    std::size_t c = rng() % pool.size();
    int y = pool[c];
    pool.erase(pool.begin() + c);
    pool.push_back(b.join(x, y));
  }
  return b.build(pool[0]);
}

/// Random instance on a coarse integer grid, so ties and collinearities are common.
inline Geophylogeny random_grid_instance(std::uint64_t seed, int n, int grid, bool identity_layout) {
  std::mt19937_64 rng(seed);
  PhyloTree t = random_tree(rng, n);
  std::vector<Decimal> xs, ys;
  for (int i = 0; i < n; ++i) {
    xs.push_back(Decimal::from_int(static_cast<std::int64_t>(rng() % (grid + 1))));
    ys.push_back(Decimal::from_int(static_cast<std::int64_t>(rng() % (grid + 1))));
  }
  Layout layout = identity_layout ? Layout::identity(n, Decimal::from_int(grid + 1)) : Layout::even();
  int width = identity_layout ? std::max(grid, n) : grid;
  return Geophylogeny(t, Decimal::from_int(width), Decimal::from_int(grid), xs, ys, std::move(layout));
}

/// Random instance in general position without undecided pairs for the given
/// leader type: leaves sit on a narrow interval in the middle of the top edge
/// and sites are rejected while they would fall into the area of an earlier
/// one or the reverse.
inline Geophylogeny geometry_free_instance(std::uint64_t seed, int n, geophylo::LeaderType type) {
  using geophylo::Point;
  std::mt19937_64 rng(seed);
  const std::int64_t width = 1000, height = 600, x1 = 500 - n / 2;
  const Point a1{x1, height}, an{x1 + n - 1, height};
  auto covers = [&](const Point& p, const Point& q) {
    if (type == geophylo::LeaderType::kS) return geophylo::in_triangle(p, a1, an, q);
    return a1.x <= q.x && q.x <= an.x && q.y >= p.y;
  };
  for (;;) {
    PhyloTree t = random_tree(rng, n);
    std::vector<Point> sites;
    int attempts = 0;
    while (static_cast<int>(sites.size()) < n && ++attempts < 100000) {
      Point c{static_cast<std::int64_t>(rng() % (width + 1)), static_cast<std::int64_t>(rng() % height)};
      bool ok = true;
      // general position: no shared coordinate, no site straight below an anchor
      ok = c.x < a1.x || c.x > an.x;
      for (const Point& p : sites) ok = ok && p.x != c.x && p.y != c.y && !covers(p, c) && !covers(c, p);
      if (ok) sites.push_back(c);
    }
    if (static_cast<int>(sites.size()) < n) continue;
    std::vector<Decimal> xs, ys, anchors;
    for (const Point& p : sites) {
      xs.push_back(Decimal::from_int(p.x));
      ys.push_back(Decimal::from_int(p.y));
    }
    for (int i = 0; i < n; ++i) anchors.push_back(Decimal::from_int(x1 + i));
    Geophylogeny g(t, Decimal::from_int(width), Decimal::from_int(height), xs, ys, Layout::explicit_positions(anchors));
    if (geophylo::classify_pairs(g, type).k() == 0) return g;
  }
}

/// Sites planted just below the anchors of a random realizable order, so that
/// zero-crossing drawings are common but not guaranteed.
inline Geophylogeny planted_instance(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  PhyloTree t = random_tree(rng, n);
  std::vector<std::uint8_t> rot(t.internal_count());
  for (auto& r : rot) r = rng() % 2;
  geophylo::LeafOrder o = geophylo::LeafOrder::from_rotations(t, rot);
  const int ytop = 2 * n;
  std::vector<Decimal> xs(n), ys(n);
  for (int a = 1; a <= n; ++a) {
    const int jitter = static_cast<int>(rng() % 13) - 6;  // tenths
    xs[o.at(a)] = Decimal::parse(trim(a + jitter / 10.0));
    ys[o.at(a)] = Decimal::from_int(static_cast<std::int64_t>(1 + rng() % (ytop - 1)));
  }
  return Geophylogeny(t, Decimal::from_int(n + 1), Decimal::from_int(ytop), xs, ys,
                      Layout::identity(n, Decimal::from_int(ytop)));
}

/// Independent segment-intersection oracle on exact rationals.
inline bool rational_segments_intersect(geophylo::Point p, geophylo::Point q, geophylo::Point r, geophylo::Point s) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  auto cross = [](cpp_int ax, cpp_int ay, cpp_int bx, cpp_int by) { return ax * by - ay * bx; };
  auto point_on = [&](geophylo::Point a, geophylo::Point b, geophylo::Point c) {
    if (a == b) return a == c;
    if (cross(cpp_int(b.x - a.x), cpp_int(b.y - a.y), cpp_int(c.x - a.x), cpp_int(c.y - a.y)) != 0) return false;
    cpp_int dot = cpp_int(c.x - a.x) * (b.x - a.x) + cpp_int(c.y - a.y) * (b.y - a.y);
    cpp_int len = cpp_int(b.x - a.x) * (b.x - a.x) + cpp_int(b.y - a.y) * (b.y - a.y);
    return dot >= 0 && dot <= len;
  };
  if (p == q) return point_on(r, s, p);
  if (r == s) return point_on(p, q, r);
  cpp_int dx1 = q.x - p.x, dy1 = q.y - p.y, dx2 = s.x - r.x, dy2 = s.y - r.y;
  cpp_int wx = r.x - p.x, wy = r.y - p.y;
  cpp_int den = cross(dx1, dy1, dx2, dy2);
  if (den != 0) {
    cpp_int tn = cross(wx, wy, dx2, dy2), un = cross(wx, wy, dx1, dy1);
    if (den < 0) {
      den = -den;
      tn = -tn;
      un = -un;
    }
    cpp_rational t = cpp_rational(tn) / cpp_rational(den);
    cpp_rational u = cpp_rational(un) / cpp_rational(den);
    return t >= 0 && t <= 1 && u >= 0 && u <= 1;
  }
  if (cross(wx, wy, dx1, dy1) != 0) return false;
  cpp_int len = dx1 * dx1 + dy1 * dy1;
  cpp_rational t0 = cpp_rational(cpp_int(wx * dx1 + wy * dy1)) / cpp_rational(len);
  cpp_rational t1 = cpp_rational(cpp_int(cpp_int(s.x - p.x) * dx1 + cpp_int(s.y - p.y) * dy1)) / cpp_rational(len);
  cpp_rational lo = t0 < t1 ? t0 : t1, hi = t0 < t1 ? t1 : t0;
  return hi >= 0 && lo <= 1;
}

inline bool oracle_leaders_cross(const geophylo::Leader& a, const geophylo::Leader& b) {
  if (a.type == geophylo::LeaderType::kS) return rational_segments_intersect(a.site, a.anchor, b.site, b.anchor);
  geophylo::Point segs_a[2][2] = {{a.site, a.bend()}, {a.bend(), a.anchor}};
  geophylo::Point segs_b[2][2] = {{b.site, b.bend()}, {b.bend(), b.anchor}};
  for (auto& sa : segs_a)
    for (auto& sb : segs_b)
      if (rational_segments_intersect(sa[0], sa[1], sb[0], sb[1])) return true;
  return false;
}

}  // namespace testing_support
