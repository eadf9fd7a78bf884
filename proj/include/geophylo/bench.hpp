#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "geophylo/generators.hpp"
#include "geophylo/io.hpp"
#include "geophylo/optimize.hpp"

namespace geophylo {

struct BenchPreset {
  std::string name;
  GeneratorKind kind = GeneratorKind::kCoastline;
  std::vector<int> sizes;
  int seeds = 1;
  LeaderType type = LeaderType::kS;
  std::vector<std::string> solvers;  // optimize() solver names
};

inline const std::vector<BenchPreset>& bench_presets() {
  static const std::vector<BenchPreset> presets = [] {
    const std::vector<std::string> all = {"ilp", "bu", "td", "la:xhop", "pipeline:best(bu,td,la:xhop)+greedy"};
    std::vector<BenchPreset> p;
    p.push_back({"coastline-small", GeneratorKind::kCoastline, {10, 20}, 3, LeaderType::kS, all});
    p.push_back({"coastline-small-po", GeneratorKind::kCoastline, {10, 20}, 3, LeaderType::kPO, all});
    p.push_back({"coastline-medium", GeneratorKind::kCoastline, {20, 30, 40}, 10, LeaderType::kS, all});
    p.push_back({"uniform-small", GeneratorKind::kUniform, {10, 20}, 3, LeaderType::kS, all});
    p.push_back({"clustered-small", GeneratorKind::kClustered, {10, 20}, 3, LeaderType::kS, all});
    p.push_back({"heuristics-large", GeneratorKind::kCoastline, {100}, 3, LeaderType::kS,
                 {"bu", "td", "la:xhop", "pipeline:best(bu,td,la:xhop)+greedy"}});
    return p;
  }();
  return presets;
}

inline const BenchPreset& find_preset(std::string_view name) {
  for (const BenchPreset& p : bench_presets())
    if (p.name == name) return p;
  std::string known;
  for (const BenchPreset& p : bench_presets()) known += (known.empty() ? "" : ", ") + p.name;
  fail(ErrorKind::kInvalidInput, "unknown bench preset '" + std::string(name) + "' (known: " + known + ")");
}

/// One row per (size, seed, solver), in that nesting order.
inline std::vector<ResultRow> run_bench(const BenchPreset& preset, double exact_time_limit,
                                        const std::function<void(const ResultRow&)>& on_row = {}) {
  std::vector<ResultRow> rows;
  for (int n : preset.sizes)
    for (int seed = 1; seed <= preset.seeds; ++seed) {
      GeneratorSpec spec;
      spec.kind = preset.kind;
      spec.n = n;
      spec.seed = static_cast<std::uint64_t>(seed);
      const Geophylogeny g = generate(spec);
      const std::string id = std::string(to_string(preset.kind)) + "-n" + std::to_string(n) + "-s" + std::to_string(seed);
      for (const std::string& solver : preset.solvers) {
        OptimizeRequest req;
        req.mode = preset.type == LeaderType::kPO ? Mode::kPO : Mode::kS;
        req.solver = solver;
        req.time_limit_seconds = exact_time_limit;
        const OptimizeOutcome r = optimize(g, req);
        ResultRow row{id, solver, std::string(to_string(preset.type)), r.crossings, r.runtime_ms, r.k, r.optimal};
        if (on_row) on_row(row);
        rows.push_back(std::move(row));
      }
    }
  return rows;
}

}  // namespace geophylo
