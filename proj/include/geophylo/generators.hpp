#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "geophylo/error.hpp"
#include "geophylo/geophylogeny.hpp"
#include "geophylo/tree.hpp"

namespace geophylo {

enum class GeneratorKind { kUniform, kCoastline, kClustered };

inline std::string_view to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::kUniform:
      return "uniform";
    case GeneratorKind::kCoastline:
      return "coastline";
    case GeneratorKind::kClustered:
      return "clustered";
  }
  return "?";
}

inline GeneratorKind parse_generator_kind(std::string_view s) {
  if (s == "uniform") return GeneratorKind::kUniform;
  if (s == "coastline") return GeneratorKind::kCoastline;
  if (s == "clustered") return GeneratorKind::kClustered;
  fail(ErrorKind::kInvalidInput, "unknown generator kind '" + std::string(s) + "'");
}

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kUniform;
  int n = 20;
  std::uint64_t seed = 1;
  // integer map units; sites land on the integer grid
  std::int64_t width = 1000;
  std::int64_t height = 600;
  double jitter = 0.25;        // coastline: x perturbation, fraction of the spacing
  double step = 1.5;           // coastline: max y change, fraction of the spacing
  int cluster_min = 3;
  int cluster_max = 10;
  double radius_factor = 0.01;  // clustered: disk radius = factor * width * cluster size
};

/// Portable random source: the engine is fully specified by the standard and
/// the derived draws avoid the implementation-defined distributions.
class GeneratorRng {
 public:
  explicit GeneratorRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t r;
    do r = engine_();
    while (r >= limit);
    return lo + static_cast<std::int64_t>(r % span);
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

struct GenSite {
  std::int64_t x, y;
};

/// Repeatedly merges a uniformly chosen item with a partner drawn with
/// probability proportional to 1 / (eps + distance); subtrees are represented
/// by the median coordinates of their sites. Returns the root handle.
inline int merge_by_distance(PhyloTree::Builder& b, std::vector<int> items, std::vector<std::vector<GenSite>> members,
                             GeneratorRng& rng, double eps) {
  auto median = [](std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? static_cast<double>(v[m]) : 0.5 * (static_cast<double>(v[m - 1]) + static_cast<double>(v[m]));
  };
  auto reference = [&](const std::vector<GenSite>& s) {
    std::vector<std::int64_t> xs, ys;
    for (const auto& p : s) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    return std::pair{median(xs), median(ys)};
  };
  std::vector<std::pair<double, double>> ref;
  for (const auto& m : members) ref.push_back(reference(m));
  while (items.size() > 1) {
    const std::size_t a = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(items.size()) - 1));
    std::vector<double> w(items.size(), 0.0);
    double total = 0;
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (k == a) continue;
      w[k] = 1.0 / (eps + std::hypot(ref[k].first - ref[a].first, ref[k].second - ref[a].second));
      total += w[k];
    }
    double pick = rng.unit() * total;
    std::size_t c = a == 0 ? 1 : 0;
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (k == a) continue;
      c = k;
      if (pick < w[k]) break;
      pick -= w[k];
    }
    // the subtree with the smaller reference x goes left in the neutral embedding
    std::size_t l = a, r = c;
    if (ref[c].first < ref[a].first || (ref[c].first == ref[a].first && ref[c].second < ref[a].second)) std::swap(l, r);
    int joined = b.join(items[l], items[r]);
    std::vector<GenSite> merged = members[l];
    merged.insert(merged.end(), members[r].begin(), members[r].end());
    const std::size_t hi = std::max(a, c), lo = std::min(a, c);
    for (std::size_t k : {hi, lo}) {
      items.erase(items.begin() + static_cast<std::ptrdiff_t>(k));
      members.erase(members.begin() + static_cast<std::ptrdiff_t>(k));
      ref.erase(ref.begin() + static_cast<std::ptrdiff_t>(k));
    }
    items.push_back(joined);
    ref.push_back(reference(merged));
    members.push_back(std::move(merged));
  }
  return items[0];
}

inline Geophylogeny assemble(const GeneratorSpec& spec, const std::vector<GenSite>& sites, PhyloTree tree) {
  std::vector<Decimal> xs(sites.size()), ys(sites.size());
  for (LeafId l = 0; l < tree.leaf_count(); ++l) {
    // labels are t<k>, k the 1-based generation index
    const std::size_t k = static_cast<std::size_t>(std::stoi(tree.label(l).substr(1)) - 1);
    xs[l] = Decimal::from_int(sites[k].x);
    ys[l] = Decimal::from_int(sites[k].y);
  }
  return Geophylogeny(std::move(tree), Decimal::from_int(spec.width), Decimal::from_int(spec.height), std::move(xs),
                      std::move(ys), Layout::even());
}

}  // namespace detail

struct GeneratedInstance {
  Geophylogeny geophylogeny;
  std::vector<std::vector<std::string>> clusters;  // leaf labels per cluster; empty unless clustered
};

/// Synthetic instance; a pure function of the spec.
inline GeneratedInstance generate_instance(const GeneratorSpec& spec) {
  if (spec.n < 2) fail(ErrorKind::kInvalidInput, "generator needs n >= 2");
  if (spec.width < spec.n || spec.height < 1) fail(ErrorKind::kInvalidInput, "generator map too small for n");
  if (spec.cluster_min < 1 || spec.cluster_max < spec.cluster_min)
    fail(ErrorKind::kInvalidInput, "invalid cluster size range");
  GeneratorRng rng(spec.seed);
  const int n = spec.n;
  const double eps = 1e-6 * std::hypot(static_cast<double>(spec.width), static_cast<double>(spec.height));
  std::vector<detail::GenSite> sites;
  std::vector<std::vector<int>> groups;  // site indices merged separately first

  // distinct x and distinct y keep the instances in general position as far as the grid allows
  std::vector<std::uint8_t> used_x(static_cast<std::size_t>(spec.width) + 1, 0), used_y(static_cast<std::size_t>(spec.height) + 1, 0);
  const bool distinct = spec.height + 1 >= 2 * n;
  int rejected = 0;
  auto take = [&](std::int64_t x, std::int64_t y) {
    // crowded grids give up on distinctness rather than loop
    if (distinct && (used_x[x] || used_y[y]) && ++rejected < 10000) return false;
    used_x[x] = used_y[y] = 1;
    sites.push_back({x, y});
    return true;
  };

  switch (spec.kind) {
    case GeneratorKind::kUniform: {
      while (static_cast<int>(sites.size()) < n) take(rng.integer(0, spec.width), rng.integer(0, spec.height));
      break;
    }
    case GeneratorKind::kCoastline: {
      const double spacing = static_cast<double>(spec.width) / n;
      std::vector<double> x(n), y(n);
      for (int i = 0; i < n; ++i) x[i] = (i + 0.5) * spacing + (2 * rng.unit() - 1) * spec.jitter * spacing;
      const int c = n / 2;
      y[c] = 0.5 * static_cast<double>(spec.height);
      auto walk = [&](int from, int to) {
        double v = y[from] + (2 * rng.unit() - 1) * spec.step * std::abs(x[to] - x[from]);
        // reflect at the map boundary
        const double h = static_cast<double>(spec.height);
        while (v < 0 || v > h) v = v < 0 ? -v : 2 * h - v;
        y[to] = v;
      };
      for (int i = c + 1; i < n; ++i) walk(i - 1, i);
      for (int i = c - 1; i >= 0; --i) walk(i + 1, i);
      for (int i = 0; i < n; ++i) {
        std::int64_t xi = std::clamp<std::int64_t>(std::llround(x[i]), 0, spec.width);
        std::int64_t yi = std::clamp<std::int64_t>(std::llround(y[i]), 0, spec.height);
        // nudge onto a free row; x is distinct by construction unless the grid is coarse
        for (std::int64_t d = 0; distinct && used_y[yi]; ++d) {
          std::int64_t cand = yi + ((d % 2) ? -(d / 2 + 1) : (d / 2 + 1));
          if (cand >= 0 && cand <= spec.height && !used_y[cand]) yi = cand;
        }
        used_y[yi] = 1;
        sites.push_back({xi, yi});
      }
      break;
    }
    case GeneratorKind::kClustered: {
      while (static_cast<int>(sites.size()) < n) {
        int size = static_cast<int>(rng.integer(spec.cluster_min, spec.cluster_max));
        size = std::min(size, n - static_cast<int>(sites.size()));
        const double cx = rng.unit() * static_cast<double>(spec.width), cy = rng.unit() * static_cast<double>(spec.height);
        const double radius = std::max(1.0, spec.radius_factor * static_cast<double>(spec.width) * size);
        std::vector<int> group;
        while (static_cast<int>(group.size()) < size) {
          double dx = (2 * rng.unit() - 1) * radius, dy = (2 * rng.unit() - 1) * radius;
          if (dx * dx + dy * dy > radius * radius) continue;
          std::int64_t x = std::llround(cx + dx), y = std::llround(cy + dy);
          if (x < 0 || x > spec.width || y < 0 || y > spec.height) continue;
          if (take(x, y)) group.push_back(static_cast<int>(sites.size()) - 1);
        }
        groups.push_back(std::move(group));
      }
      break;
    }
  }

  std::vector<std::vector<std::string>> clusters;
  for (const auto& group : groups) {
    clusters.emplace_back();
    for (int i : group) clusters.back().push_back("t" + std::to_string(i + 1));
  }
  PhyloTree::Builder b;
  std::vector<int> handle(n);
  for (int i = 0; i < n; ++i) handle[i] = b.leaf("t" + std::to_string(i + 1));
  if (groups.empty()) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    groups.push_back(all);
  }
  std::vector<int> tops;
  std::vector<std::vector<detail::GenSite>> top_members;
  for (const auto& group : groups) {
    std::vector<int> items;
    std::vector<std::vector<detail::GenSite>> members;
    for (int i : group) {
      items.push_back(handle[i]);
      members.push_back({sites[i]});
    }
    std::vector<detail::GenSite> all_members;
    for (int i : group) all_members.push_back(sites[i]);
    tops.push_back(detail::merge_by_distance(b, items, members, rng, eps));
    top_members.push_back(std::move(all_members));
  }
  int root = tops.size() == 1 ? tops[0] : detail::merge_by_distance(b, tops, top_members, rng, eps);
  return {detail::assemble(spec, sites, b.build(root)), std::move(clusters)};
}

inline Geophylogeny generate(const GeneratorSpec& spec) { return generate_instance(spec).geophylogeny; }

}  // namespace geophylo
