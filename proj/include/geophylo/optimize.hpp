#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "geophylo/branch_bound.hpp"
#include "geophylo/constraints.hpp"
#include "geophylo/crossings.hpp"
#include "geophylo/error.hpp"
#include "geophylo/fpt.hpp"
#include "geophylo/heuristics.hpp"
#include "geophylo/ilp.hpp"
#include "geophylo/internal_dp.hpp"

namespace geophylo {

enum class Mode { kInternal, kS, kPO };

inline Mode parse_mode(std::string_view s) {
  if (s == "internal") return Mode::kInternal;
  if (s == "s") return Mode::kS;
  if (s == "po") return Mode::kPO;
  fail(ErrorKind::kInvalidInput, "unknown mode '" + std::string(s) + "' (expected internal, s or po)");
}

/// One solve as requested by the CLI or the service.
///
/// External solvers: ilp (exact branch and bound), fpt, bruteforce, bu, td,
/// la:<measure>, greedy, pipeline:<spec>. Internal mode: dp.
struct OptimizeRequest {
  Mode mode = Mode::kS;
  std::string solver;  // empty: ilp, or dp in internal mode
  std::string measure = "xhop";
  LeaderType count_type = LeaderType::kS;  // leader type for the crossing count in internal mode
  Constraints constraints;
  double time_limit_seconds = 0;  // exact solver only; <= 0 unlimited
  int k_cap = 20;
};

struct OptimizeOutcome {
  LeafOrder order;
  double objective = 0;    // measure value in internal mode, crossings otherwise
  std::int64_t crossings = 0;
  double runtime_ms = 0;
  bool optimal = false;
  std::int64_t k = -1;
  std::string solver;
};

inline OptimizeOutcome optimize(const Geophylogeny& g, const OptimizeRequest& req) {
  const auto start = std::chrono::steady_clock::now();
  OptimizeOutcome out;
  const bool internal = req.mode == Mode::kInternal;
  const LeaderType type = internal ? req.count_type : (req.mode == Mode::kPO ? LeaderType::kPO : LeaderType::kS);
  out.solver = req.solver.empty() ? (internal ? "dp" : "ilp") : req.solver;
  const std::string& s = out.solver;
  auto unconstrained = [&] {
    if (!req.constraints.empty())
      fail(ErrorKind::kInvalidInput, "solver '" + s + "' does not accept constraints; use ilp or bruteforce");
  };

  if (internal) {
    if (s != "dp") fail(ErrorKind::kInvalidInput, "internal mode supports the dp solver only, not '" + s + "'");
    const IntMeasure m = builtin_measure(g, req.measure);
    auto r = optimize_internal(g, m, req.constraints);
    out.order = r.order;
    out.objective = r.value;
    out.optimal = true;
  } else {
    if (s == "ilp") {
      ExactOptions o;
      o.time_limit_seconds = req.time_limit_seconds;
      o.constraints = req.constraints;
      ExactResult r = solve_exact(build_ilp(g, type), o);
      out.order = r.order;
      out.optimal = r.optimal;
    } else if (s == "fpt") {
      unconstrained();
      FptOptions o;
      o.k_cap = req.k_cap;
      FptResult r = solve_fpt(g, type, o);
      out.order = r.order;
      out.optimal = true;
    } else if (s == "bruteforce") {
      if (g.n() > kDefaultBruteForceCap)
        fail(ErrorKind::kCapExceeded, "brute force refused: " + std::to_string(g.n()) + " leaves exceeds the cap of " +
                                          std::to_string(kDefaultBruteForceCap));
      CrossTable table(g, type);
      std::optional<std::int64_t> best;
      for_each_realizable_order(g.tree(), [&](const LeafOrder& o) {
        if (!req.constraints.satisfied_by(g.tree(), o)) return;
        const std::int64_t c = table.count(o);
        if (!best || c < *best) {
          best = c;
          out.order = o;
        }
      });
      if (!best) fail(ErrorKind::kInfeasible, "constraints are infeasible: no admissible leaf order");
      out.optimal = true;
    } else {
      unconstrained();
      Pipeline p = Pipeline::parse(s.rfind("pipeline:", 0) == 0 ? std::string_view(s).substr(9) : std::string_view(s));
      out.order = p.run(g, type).order;
      out.optimal = false;
    }
  }
  out.crossings = count_crossings(g, out.order, type);
  if (!internal) {
    out.objective = static_cast<double>(out.crossings);
    out.k = classify_pairs(g, type).k();
  }
  out.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace geophylo
