#pragma once

#include <algorithm>
#include <cstdint>

namespace geophylo {

// Coordinates live on an integer grid (see Frame): every predicate below is
// exact. Differences stay below 2^42, so products fit in 128 bits.
using Coord = std::int64_t;
using Wide = __int128;

struct Point {
  Coord x = 0;
  Coord y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Segment {
  Point a;
  Point b;
};

inline int sign(Wide v) { return (v > 0) - (v < 0); }

/// +1 if c lies left of the directed line a->b, -1 if right, 0 if collinear.
inline int orient(const Point& a, const Point& b, const Point& c) {
  Wide cross = Wide(b.x - a.x) * Wide(c.y - a.y) - Wide(b.y - a.y) * Wide(c.x - a.x);
  return sign(cross);
}

/// c collinear with a-b is assumed.
inline bool in_bounding_box(const Point& a, const Point& b, const Point& c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
         c.y <= std::max(a.y, b.y);
}

inline bool on_segment(const Segment& s, const Point& p) { return orient(s.a, s.b, p) == 0 && in_bounding_box(s.a, s.b, p); }

/// Closed segments (endpoints included, degenerate segments allowed).
inline bool intersects(const Segment& s, const Segment& t) {
  int o1 = orient(s.a, s.b, t.a);
  int o2 = orient(s.a, s.b, t.b);
  int o3 = orient(t.a, t.b, s.a);
  int o4 = orient(t.a, t.b, s.b);
  if (s.a == s.b && t.a == t.b) return s.a == t.a;
  if (s.a == s.b) return on_segment(t, s.a);
  if (t.a == t.b) return on_segment(s, t.a);
  if (o1 != 0 || o2 != 0 || o3 != 0 || o4 != 0) return o1 * o2 <= 0 && o3 * o4 <= 0;
  // all four points on one line
  return in_bounding_box(s.a, s.b, t.a) || in_bounding_box(s.a, s.b, t.b) || in_bounding_box(t.a, t.b, s.a) ||
         in_bounding_box(t.a, t.b, s.b);
}

/// Closed triangle containment; degenerate triangles reduce to segment tests.
inline bool in_triangle(const Point& a, const Point& b, const Point& c, const Point& p) {
  int o = orient(a, b, c);
  if (o == 0) {
    return on_segment({a, b}, p) || on_segment({b, c}, p) || on_segment({a, c}, p);
  }
  int d1 = orient(a, b, p) * o;
  int d2 = orient(b, c, p) * o;
  int d3 = orient(c, a, p) * o;
  return d1 >= 0 && d2 >= 0 && d3 >= 0;
}

}  // namespace geophylo
