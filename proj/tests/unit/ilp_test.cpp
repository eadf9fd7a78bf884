#include <gtest/gtest.h>

#include <map>
#include <optional>
#include <regex>
#include <sstream>

#include "geophylo/ilp.hpp"
#include "support.hpp"

using namespace geophylo;

namespace {

// Minimal reader for the LP text we emit, independent of IlpModel.
struct LpProgram {
  std::vector<std::string> vars;
  std::map<std::string, int> index;
  std::vector<int> objective;
  struct Row {
    std::vector<std::pair<int, long long>> terms;
    std::string sense;
    long long rhs;
  };
  std::vector<Row> rows;
  std::vector<std::string> binaries;
};

int var_of(LpProgram& p, const std::string& name) {
  auto it = p.index.find(name);
  if (it != p.index.end()) return it->second;
  p.index[name] = static_cast<int>(p.vars.size());
  p.vars.push_back(name);
  return static_cast<int>(p.vars.size()) - 1;
}

std::vector<std::pair<int, long long>> parse_terms(LpProgram& p, const std::string& expr) {
  std::vector<std::pair<int, long long>> out;
  std::istringstream in(expr);
  std::string tok;
  long long sign = 1, coef = 1;
  while (in >> tok) {
    if (tok == "+") {
      sign = 1;
    } else if (tok == "-") {
      sign = -1;
    } else if (tok[0] == '-' && tok.size() > 1 && std::isalpha(static_cast<unsigned char>(tok[1]))) {
      out.push_back({var_of(p, tok.substr(1)), -coef});
      coef = 1;
      sign = 1;
    } else if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
      coef = std::stoll(tok);
    } else if (tok[0] == '-' && tok.size() > 1) {
      sign = -1;
      coef = std::stoll(tok.substr(1));
    } else {
      out.push_back({var_of(p, tok), sign * coef});
      coef = 1;
      sign = 1;
    }
  }
  return out;
}

LpProgram read_lp(const std::string& text) {
  LpProgram p;
  std::istringstream in(text);
  std::string line, section, pending;
  std::vector<std::string> statements;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '\\') continue;
    if (line == "Minimize" || line == "Subject To" || line == "Binary" || line == "End") {
      if (!pending.empty()) statements.push_back(section + "|" + pending);
      pending.clear();
      section = line;
      continue;
    }
    if (section == "Binary") {
      p.binaries.push_back(line.substr(1));
      continue;
    }
    // continuation lines start with three spaces
    if (line.rfind("   ", 0) == 0) {
      pending += " " + line;
    } else {
      if (!pending.empty()) statements.push_back(section + "|" + pending);
      pending = line;
    }
  }
  std::regex row_re(R"(^\s*(\w+):\s*(.*?)\s*(<=|>=|=)\s*(-?\d+)\s*$)");
  for (const auto& s : statements) {
    auto bar = s.find('|');
    std::string sec = s.substr(0, bar), body = s.substr(bar + 1);
    if (sec == "Minimize") {
      auto colon = body.find(':');
      for (auto [v, c] : parse_terms(p, body.substr(colon + 1))) p.objective.push_back(v);
      continue;
    }
    std::smatch m;
    EXPECT_TRUE(std::regex_match(body, m, row_re)) << body;
    p.rows.push_back({parse_terms(p, m[2]), m[3], std::stoll(m[4])});
  }
  return p;
}

// Depth-first 0/1 search with bound propagation; fine for a few dozen variables.
struct ZeroOneSolver {
  const LpProgram& p;
  std::vector<int> value;  // -1 free
  std::optional<long long> best;
  std::vector<std::vector<int>> rows_of;
  std::vector<std::uint8_t> in_obj;

  explicit ZeroOneSolver(const LpProgram& prog) : p(prog), value(prog.vars.size(), -1), rows_of(prog.vars.size()) {
    in_obj.assign(p.vars.size(), 0);
    for (int v : p.objective) in_obj[v] = 1;
    for (std::size_t r = 0; r < p.rows.size(); ++r)
      for (auto [v, c] : p.rows[r].terms) rows_of[v].push_back(static_cast<int>(r));
  }

  // false on conflict
  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& row : p.rows) {
        long long lo = 0, hi = 0;
        for (auto [v, c] : row.terms) {
          if (value[v] >= 0) {
            lo += c * value[v];
            hi += c * value[v];
          } else {
            lo += std::min(0LL, c);
            hi += std::max(0LL, c);
          }
        }
        const bool need_ge = row.sense != "<=", need_le = row.sense != ">=";
        if ((need_ge && hi < row.rhs) || (need_le && lo > row.rhs)) return false;
        for (auto [v, c] : row.terms) {
          if (value[v] >= 0) continue;
          long long span = c < 0 ? -c : c;
          int forced = -1;
          // setting v against its best direction loses span from hi / adds span to lo
          if (need_ge && hi - span < row.rhs) forced = c > 0 ? 1 : 0;
          if (need_le && lo + span > row.rhs) {
            int f = c > 0 ? 0 : 1;
            if (forced >= 0 && forced != f) return false;
            forced = f;
          }
          if (forced >= 0) {
            value[v] = forced;
            trail.push_back(v);
            changed = true;
            break;
          }
        }
      }
    }
    return true;
  }

  bool feasible() const {
    for (const auto& row : p.rows) {
      long long a = 0;
      for (auto [v, c] : row.terms) a += c * value[v];
      if (row.sense == "<=" ? a > row.rhs : row.sense == ">=" ? a < row.rhs : a != row.rhs) return false;
    }
    return true;
  }

  long long objective_lb() const {
    long long s = 0;
    for (int v : p.objective) s += value[v] == 1 ? 1 : 0;
    return s;
  }

  void search() {
    std::vector<int> trail;
    if (!propagate(trail)) {
      for (int v : trail) value[v] = -1;
      return;
    }
    long long lb = objective_lb();
    if (best && lb >= *best) {
      for (int v : trail) value[v] = -1;
      return;
    }
    int pick = -1;
    for (std::size_t v = 0; v < value.size(); ++v)
      if (value[v] < 0 && !in_obj[v]) {
        pick = static_cast<int>(v);
        break;
      }
    if (pick < 0) {
      // only objective variables left: all-zero is optimal here if feasible
      std::vector<int> zeroed;
      for (std::size_t v = 0; v < value.size(); ++v)
        if (value[v] < 0) {
          value[v] = 0;
          zeroed.push_back(static_cast<int>(v));
        }
      bool ok = feasible();
      for (int v : zeroed) value[v] = -1;
      if (ok) {
        best = lb;
        for (int v : trail) value[v] = -1;
        return;
      }
      for (int v : zeroed) {
        pick = v;
        break;
      }
    }
    if (pick < 0) {
      best = lb;
    } else {
      for (int b : {0, 1}) {
        value[pick] = b;
        search();
        value[pick] = -1;
      }
    }
    for (int v : trail) value[v] = -1;
  }
};

std::optional<long long> solve_lp_text(const std::string& text, const std::vector<std::string>& zero = {}) {
  LpProgram p = read_lp(text);
  ZeroOneSolver s(p);
  for (const auto& name : zero) s.value[p.index.at(name)] = 0;
  s.search();
  return s.best;
}

}  // namespace

TEST(Ilp, T3ModelShape) {
  Geophylogeny g = testing_support::t3();
  IlpModel m = build_ilp(g, LeaderType::kS);
  EXPECT_EQ(m.chi_count(), 3);
  EXPECT_EQ(m.rho_count(), 2);
  EXPECT_EQ(m.big_m(), 3);
  std::string lp = export_lp(m);
  LpProgram p = read_lp(lp);
  int chi_lines = 0, rho_lines = 0;
  for (const auto& b : p.binaries) {
    chi_lines += b.rfind("chi_", 0) == 0;
    rho_lines += b.rfind("rho_", 0) == 0;
  }
  EXPECT_EQ(chi_lines, 3);
  EXPECT_EQ(rho_lines, 2);
  EXPECT_EQ(p.objective.size(), 3u);
  EXPECT_EQ(solve_lp_text(lp), 1);
}

TEST(Ilp, GeometryFreeHasNoDVariables) {
  // sites spread below a wide top, none inside another's area
  Geophylogeny g = testing_support::make_instance("((l1,l2),(l3,l4));", {{0, 3}, {1, 1}, {4, 1}, {5, 3}},
                                                  Layout::explicit_positions({Decimal::from_int(2), Decimal::from_int(3),
                                                                              Decimal::from_int(4), Decimal::from_int(5)},
                                                                             Decimal::from_int(4)),
                                                  6, 4);
  ASSERT_EQ(classify_pairs(g, LeaderType::kS).k(), 0);
  IlpModel m = build_ilp(g, LeaderType::kS);
  EXPECT_EQ(m.d_count(), 0);
  std::string lp = export_lp(m);
  EXPECT_EQ(lp.find("d_"), std::string::npos);
  for (const auto& c : m.constraints()) {
    bool ok = c.name.rfind("frot_", 0) == 0 || c.name.rfind("fkeep_", 0) == 0 || c.name.rfind("always_", 0) == 0;
    EXPECT_TRUE(ok) << c.name;
  }
}

TEST(Ilp, LpOptimumEqualsBruteForce) {
  for (int seed = 0; seed < 120; ++seed) {
    const int n = 3 + seed % 5;
    // alternate coarse grids (degenerate) and fine grids (general position)
    const int grid = seed % 3 == 0 ? 4 : 60;
    Geophylogeny g = testing_support::random_grid_instance(5000 + seed, n, grid, seed % 2);
    for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
      IlpModel m = build_ilp(g, type);
      auto opt = solve_lp_text(export_lp(m));
      ASSERT_TRUE(opt.has_value());
      EXPECT_EQ(*opt, brute_force_min(g, type).crossings) << "seed " << seed << " " << to_string(type);
    }
  }
}

TEST(Ilp, ForcingZeroCrossingsFeasibleIffOptimumZero) {
  for (int seed = 0; seed < 60; ++seed) {
    Geophylogeny g = testing_support::random_grid_instance(7000 + seed, 3 + seed % 4, 30, seed % 2);
    for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
      IlpModel m = build_ilp(g, type);
      std::vector<std::string> chis;
      for (int v : m.objective()) chis.push_back(m.name(v));
      bool feasible = solve_lp_text(export_lp(m), chis).has_value();
      EXPECT_EQ(feasible, brute_force_min(g, type).crossings == 0) << seed;
    }
  }
}

TEST(Ilp, PositionFunctionMatchesOrders) {
  for (int seed = 0; seed < 30; ++seed) {
    Geophylogeny g = testing_support::random_grid_instance(9000 + seed, 2 + seed % 7, 10, true);
    IlpModel m = build_ilp(g, LeaderType::kS);
    for (const LeafOrder& o : realizable_orders(g.tree())) {
      std::vector<int> val(m.variable_count(), 0);
      for (int k = 0; k < g.tree().internal_count(); ++k)
        val[m.rho(g.tree().internal_vertex(k))] = o.rotations()[k];
      for (LeafId i = 0; i < g.n(); ++i) {
        const Affine& a = m.position(i);
        long long p = a.constant;
        for (auto [v, c] : a.terms) p += c * val[v];
        EXPECT_EQ(p, o.position(i));
      }
    }
  }
}

TEST(Ilp, SideConstraintsPlaceLeafOnDecidedSide) {
  // With d fixed by the side rows, the placed leaf is strictly on that side of x*.
  for (int seed = 0; seed < 40; ++seed) {
    Geophylogeny g = testing_support::random_grid_instance(9500 + seed, 4 + seed % 5, 80, seed % 2);
    for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
      IlpModel m = build_ilp(g, type);
      const PairAnalysis& pa = m.pairs();
      for (const LeafOrder& o : realizable_orders(g.tree())) {
        auto sides = m.u_left();
        sides.insert(sides.end(), m.u_right().begin(), m.u_right().end());
        for (auto [p, q] : sides) {
          const PairInfo& f = pa.info(p, q);
          int pos = o.position(p);
          // exactly one d value satisfies both side rows
          int d = pos <= f.lt ? 0 : 1;
          Wide x = Wide(g.X(pos)) * f.xs_den;
          if (d == 0) {
            EXPECT_LT(x, f.xs_num);
          } else {
            EXPECT_GT(x, f.xs_num);
          }
        }
      }
    }
  }
}
