#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "geophylo/crossings.hpp"
#include "geophylo/geophylogeny.hpp"
#include "geophylo/leaf_order.hpp"

namespace geophylo {

struct RenderOptions {
  // nullopt draws the internal-labeling view: matching colours on each leaf and
  // its site instead of leaders
  std::optional<LeaderType> leaders = LeaderType::kS;
  bool highlight_crossings = false;
  bool labels = true;
};

namespace detail {

inline constexpr std::array<const char*, 12> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                         "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                                         "#bcbd22", "#17becf", "#393b79", "#ad494a"};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace detail

/// Deterministic drawing: tree as a rectangular cladogram above the map, leaves
/// at the layout positions, SVG y pointing down.
inline std::string render_svg(const Geophylogeny& g, const LeafOrder& order, const RenderOptions& opt = {}) {
  using detail::num;
  const PhyloTree& t = g.tree();
  const int n = g.n();
  constexpr double kMargin = 20, kCanvas = 800, kLevel = 20;
  const double s = kCanvas / g.to_map(g.width());
  std::vector<int> level(t.vertex_count(), 0);
  for (VertexId v : t.postorder())
    if (!t.is_leaf(v)) level[v] = 1 + std::max(level[t.left(v)], level[t.right(v)]);
  const double tree_h = kLevel * level[t.root()] + (opt.labels ? 14 : 0);
  const double ytop = g.to_map(g.ytop());
  const double base = kMargin + tree_h;  // svg y of ytop
  auto sx = [&](Coord x) { return kMargin + g.to_map(x) * s; };
  auto sy = [&](Coord y) { return base + (ytop - g.to_map(y)) * s; };
  const double width = kCanvas + 2 * kMargin;
  const double height = base + ytop * s + kMargin;

  std::vector<double> vx(t.vertex_count()), vy(t.vertex_count());
  for (VertexId v : t.postorder()) {
    if (t.is_leaf(v)) {
      vx[v] = sx(g.X(order.position(v)));
      vy[v] = base;
    } else {
      vx[v] = (vx[t.left(v)] + vx[t.right(v)]) / 2;
      vy[v] = base - kLevel * level[v];
    }
  }

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  out += "<rect class=\"map\" x=\"" + num(kMargin) + "\" y=\"" + num(sy(g.height())) + "\" width=\"" + num(kCanvas) +
         "\" height=\"" + num(g.to_map(g.height()) * s) + "\" fill=\"#f4f1e8\" stroke=\"#444\"/>\n";

  out += "<g class=\"tree\" fill=\"none\" stroke=\"#222\" stroke-width=\"1.5\">\n";
  for (VertexId v : t.preorder()) {
    if (t.is_leaf(v)) continue;
    const VertexId a = t.left(v), b = t.right(v);
    out += "<path d=\"M" + num(vx[a]) + " " + num(vy[a]) + " V" + num(vy[v]) + " H" + num(vx[b]) + " V" + num(vy[b]) +
           "\"/>\n";
  }
  out += "</g>\n";

  std::vector<bool> crossing(n, false);
  if (opt.leaders && opt.highlight_crossings)
    for (LeafId i = 0; i < n; ++i)
      for (LeafId j = i + 1; j < n; ++j)
        if (leaders_cross(g, *opt.leaders, i, order.position(i), j, order.position(j))) crossing[i] = crossing[j] = true;

  auto colour = [&](LeafId l) -> std::string {
    if (opt.leaders) return "#222";
    return detail::kPalette[(order.position(l) - 1) % detail::kPalette.size()];
  };
  if (opt.leaders) {
    out += "<g class=\"leaders\" fill=\"none\" stroke-width=\"1\">\n";
    for (int p = 1; p <= n; ++p) {
      const LeafId l = order.sequence()[p - 1];
      const Point site = g.site(l);
      const double x0 = sx(site.x), y0 = sy(site.y), x1 = sx(g.X(p));
      std::string d = "M" + num(x0) + " " + num(y0);
      d += *opt.leaders == LeaderType::kS ? " L" + num(x1) + " " + num(base) : " H" + num(x1) + " V" + num(base);
      const bool hot = crossing[l];
      out += std::string("<path class=\"leader") + (hot ? " crossing" : "") + "\" stroke=\"" +
             (hot ? "#d62728" : "#555") + "\" d=\"" + d + "\"/>\n";
    }
    out += "</g>\n";
  }

  out += "<g class=\"leaves\">\n";
  for (int p = 1; p <= n; ++p) {
    const LeafId l = order.sequence()[p - 1];
    out += "<circle cx=\"" + num(vx[l]) + "\" cy=\"" + num(base) + "\" r=\"3\" fill=\"" + colour(l) + "\"/>\n";
    if (opt.labels)
      out += "<text x=\"" + num(vx[l]) + "\" y=\"" + num(base - 5) +
             "\" font-size=\"9\" text-anchor=\"middle\" font-family=\"sans-serif\">" + detail::xml_escape(t.label(l)) +
             "</text>\n";
  }
  out += "</g>\n";

  out += "<g class=\"sites\" fill=\"none\" stroke-width=\"1.5\">\n";
  for (int p = 1; p <= n; ++p) {
    const LeafId l = order.sequence()[p - 1];
    const double x = sx(g.site(l).x), y = sy(g.site(l).y);
    out += "<path stroke=\"" + colour(l) + "\" d=\"M" + num(x - 3) + " " + num(y - 3) + " L" + num(x + 3) + " " +
           num(y + 3) + " M" + num(x - 3) + " " + num(y + 3) + " L" + num(x + 3) + " " + num(y - 3) + "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace geophylo
