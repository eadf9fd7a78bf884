#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "geophylo/crossings.hpp"
#include "geophylo/error.hpp"
#include "geophylo/geophylogeny.hpp"
#include "geophylo/pairs.hpp"

namespace geophylo {

struct LinTerm {
  int var;
  std::int64_t coef;
};

enum class Sense { kLe, kGe, kEq };

struct LinConstraint {
  std::string name;
  std::vector<LinTerm> terms;
  Sense sense = Sense::kGe;
  std::int64_t rhs = 0;
};

/// Affine function constant + sum coef * var.
struct Affine {
  std::int64_t constant = 0;
  std::vector<LinTerm> terms;
};

/// 0/1 program for crossing minimization.
///
/// Variables: rho_u per internal vertex, d_p_q per undecided pair, chi_i_j per
/// leaf pair (i < j) and, for degenerate pairs only, z_i_a placement
/// indicators. Leaf indices in names are 1-based neutral positions.
///
/// Leaf placement L_i(rho) is expressed in position units, and the side
/// constraints compare it with the integer threshold rank of x*: positions
/// 1..lt lie strictly left of x*, the rest strictly right (ties are routed
/// to the z formulation). This keeps every coefficient a small integer for any
/// layout; M = n.
class IlpModel {
 public:
  const Geophylogeny& geophylogeny() const { return pairs_.geophylogeny(); }
  LeaderType type() const { return pairs_.type(); }
  const PairAnalysis& pairs() const { return pairs_; }

  int variable_count() const { return static_cast<int>(names_.size()); }
  const std::string& name(int var) const { return names_[var]; }
  const std::vector<int>& objective() const { return objective_; }
  const std::vector<LinConstraint>& constraints() const { return constraints_; }
  std::int64_t big_m() const { return big_m_; }

  int rho(VertexId u) const { return rho_[geophylogeny().tree().internal_index(u)]; }
  int chi(LeafId i, LeafId j) const { return chi_.at(i < j ? std::pair{i, j} : std::pair{j, i}); }
  /// -1 if (p, q) carries no d variable.
  int d(LeafId p, LeafId q) const {
    auto it = d_.find({p, q});
    return it == d_.end() ? -1 : it->second;
  }
  /// -1 if leaf i has no placement indicators.
  int z(LeafId i, int position) const { return z_[i].empty() ? -1 : z_[i][position - 1]; }
  int rho_count() const { return static_cast<int>(rho_.size()); }
  int d_count() const { return static_cast<int>(d_.size()); }
  int chi_count() const { return static_cast<int>(chi_.size()); }

  /// L_i(rho) in position units.
  const Affine& position(LeafId i) const { return position_[i]; }

  const std::vector<std::pair<LeafId, LeafId>>& f_rotate() const { return f_rotate_; }
  const std::vector<std::pair<LeafId, LeafId>>& f_keep() const { return f_keep_; }
  const std::vector<std::pair<LeafId, LeafId>>& u_left() const { return u_left_; }
  const std::vector<std::pair<LeafId, LeafId>>& u_right() const { return u_right_; }
  const std::vector<std::pair<LeafId, LeafId>>& general_pairs() const { return general_; }

  /// The 0/1 assignment induced by a leaf order, with chi set to the true crossing status.
  std::vector<int> assignment(const LeafOrder& order) const {
    const PhyloTree& t = geophylogeny().tree();
    std::vector<int> val(names_.size(), 0);
    for (int k = 0; k < t.internal_count(); ++k) val[rho_[k]] = order.rotations()[k];
    for (const auto& [pq, var] : d_) val[var] = order.position(pq.first) > pairs_.info(pq.first, pq.second).lt;
    for (const auto& [ij, var] : chi_)
      val[var] = pairs_.cross(ij.first, order.position(ij.first), ij.second, order.position(ij.second));
    for (LeafId i = 0; i < static_cast<int>(z_.size()); ++i)
      if (!z_[i].empty()) val[z_[i][order.position(i) - 1]] = 1;
    return val;
  }

  /// Name of the first violated constraint, or empty.
  std::string violated(const std::vector<int>& val) const {
    for (const auto& c : constraints_) {
      std::int64_t a = 0;
      for (const auto& [var, coef] : c.terms) a += coef * val[var];
      bool ok = c.sense == Sense::kLe ? a <= c.rhs : c.sense == Sense::kGe ? a >= c.rhs : a == c.rhs;
      if (!ok) return c.name;
    }
    return {};
  }

 private:
  friend IlpModel build_ilp(const Geophylogeny& g, LeaderType type);

  int add_var(std::string name) {
    names_.push_back(std::move(name));
    return static_cast<int>(names_.size()) - 1;
  }
  void add(std::string name, std::vector<LinTerm> terms, Sense sense, std::int64_t rhs) {
    constraints_.push_back({std::move(name), std::move(terms), sense, rhs});
  }

  PairAnalysis pairs_;
  std::vector<std::string> names_;
  std::vector<int> objective_;
  std::vector<LinConstraint> constraints_;
  std::int64_t big_m_ = 0;
  std::vector<int> rho_;
  std::map<std::pair<LeafId, LeafId>, int> chi_, d_;
  std::vector<Affine> position_;
  std::vector<std::vector<int>> z_;
  std::vector<std::pair<LeafId, LeafId>> f_rotate_, f_keep_, u_left_, u_right_, general_;
};

inline IlpModel build_ilp(const Geophylogeny& g, LeaderType type) {
  IlpModel m;
  m.pairs_ = PairAnalysis(g, type);
  const PhyloTree& t = g.tree();
  const int n = g.n();
  m.big_m_ = n;
  auto idx = [](LeafId i) { return std::to_string(i + 1); };

  for (int k = 0; k < t.internal_count(); ++k) m.rho_.push_back(m.add_var("rho_" + std::to_string(k + 1)));

  m.position_.resize(n);
  for (LeafId i = 0; i < n; ++i) {
    Affine& a = m.position_[i];
    a.constant = 1;
    for (VertexId u : t.ancestors(i)) {
      int var = m.rho_[t.internal_index(u)];
      if (t.in_clade(t.left(u), i)) {
        a.terms.push_back({var, t.size(t.right(u))});
      } else {
        a.constant += t.size(t.left(u));
        a.terms.push_back({var, -t.size(t.left(u))});
      }
    }
  }

  for (LeafId i = 0; i < n; ++i)
    for (LeafId j = i + 1; j < n; ++j) {
      int var = m.add_var("chi_" + idx(i) + "_" + idx(j));
      m.chi_[{i, j}] = var;
      m.objective_.push_back(var);
    }

  std::vector<std::uint8_t> needs_z(n, 0);
  for (LeafId i = 0; i < n; ++i)
    for (LeafId j = i + 1; j < n; ++j) {
      const PairInfo& f = m.pairs_.info(i, j);
      const int chi = m.chi_[{i, j}];
      const int rho = m.rho_[t.internal_index(t.lca(i, j))];
      const std::string tag = idx(i) + "_" + idx(j);
      if (f.kind == PairKind::kOrder) {
        if (f.cross_small_left && f.cross_small_right) {
          m.add("always_" + tag, {{chi, 1}}, Sense::kGe, 1);
        } else if (f.cross_small_left) {
          m.f_rotate_.push_back({i, j});
          m.add("frot_" + tag, {{chi, 1}, {rho, 1}}, Sense::kGe, 1);
        } else if (f.cross_small_right) {
          m.f_keep_.push_back({i, j});
          m.add("fkeep_" + tag, {{chi, 1}, {rho, -1}}, Sense::kGe, 0);
        }
        continue;
      }
      if (f.kind == PairKind::kThreshold && !f.tie) {
        const LeafId p = f.p, q = f.q;
        const std::string ptag = idx(p) + "_" + idx(q);
        int d = m.add_var("d_" + ptag);
        m.d_[{p, q}] = d;
        if (p < q) {
          m.u_left_.push_back({p, q});
          m.add("uleft_a_" + ptag, {{chi, 1}, {rho, -1}, {d, 1}}, Sense::kGe, 0);
          m.add("uleft_b_" + ptag, {{chi, 1}, {rho, 1}, {d, -1}}, Sense::kGe, 0);
        } else {
          m.u_right_.push_back({p, q});
          m.add("uright_a_" + ptag, {{chi, 1}, {rho, -1}, {d, -1}}, Sense::kGe, -1);
          m.add("uright_b_" + ptag, {{chi, 1}, {rho, 1}, {d, 1}}, Sense::kGe, 1);
        }
        // L_p - M d <= lt  and  L_p + M (1 - d) >= lt + 1
        const Affine& lp = m.position_[p];
        std::vector<LinTerm> left = lp.terms, right = lp.terms;
        left.push_back({d, -m.big_m_});
        right.push_back({d, -m.big_m_});
        m.add("side_l_" + ptag, left, Sense::kLe, f.lt - lp.constant);
        m.add("side_r_" + ptag, right, Sense::kGe, f.lt + 1 - m.big_m_ - lp.constant);
        continue;
      }
      m.general_.push_back({i, j});
      needs_z[i] = needs_z[j] = 1;
    }

  // degenerate pairs: explicit placement indicators
  std::vector<std::vector<int>>& z = m.z_;
  z.assign(n, {});
  for (LeafId i = 0; i < n; ++i) {
    if (!needs_z[i]) continue;
    std::vector<LinTerm> one, link = m.position_[i].terms;
    for (auto& term : link) term.coef = -term.coef;
    for (int a = 1; a <= n; ++a) {
      int var = m.add_var("z_" + idx(i) + "_" + std::to_string(a));
      z[i].push_back(var);
      one.push_back({var, 1});
      link.push_back({var, a});
    }
    m.add("place_" + idx(i), one, Sense::kEq, 1);
    m.add("link_" + idx(i), link, Sense::kEq, m.position_[i].constant);
  }
  for (auto [i, j] : m.general_) {
    const int chi = m.chi_[{i, j}];
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b) {
        if (a == b || !leaders_cross(g, type, i, a, j, b)) continue;
        m.add("gen_" + idx(i) + "_" + idx(j) + "_" + std::to_string(a) + "_" + std::to_string(b),
              {{chi, 1}, {z[i][a - 1], -1}, {z[j][b - 1], -1}}, Sense::kGe, -1);
      }
  }
  return m;
}

/// Writes the model in CPLEX LP format.
inline void export_lp(const IlpModel& m, std::ostream& out) {
  const Geophylogeny& g = m.geophylogeny();
  out << "\\ leader crossing minimization, " << to_string(m.type()) << " leaders, " << g.n() << " leaves\n";
  for (LeafId i = 0; i < g.n(); ++i) out << "\\ leaf " << (i + 1) << " = " << g.tree().label(i) << "\n";
  for (int k = 0; k < g.tree().internal_count(); ++k) {
    VertexId u = g.tree().internal_vertex(k);
    out << "\\ rho_" << (k + 1) << " rotates the parent of {" << LeafOrder::describe_clade(g.tree(), u) << "}\n";
  }
  auto write_terms = [&](const std::vector<LinTerm>& terms) {
    int on_line = 0;
    bool first = true;
    for (const auto& [var, coef] : terms) {
      if (coef == 0) continue;
      if (on_line == 8) {
        out << "\n   ";
        on_line = 0;
      }
      std::int64_t mag = coef < 0 ? -coef : coef;
      out << (coef < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
      if (mag != 1) out << mag << " ";
      out << m.name(var);
      first = false;
      ++on_line;
    }
    if (first) out << "0 " << m.name(0);
  };
  out << "Minimize\n obj: ";
  std::vector<LinTerm> obj;
  for (int v : m.objective()) obj.push_back({v, 1});
  write_terms(obj);
  out << "\nSubject To\n";
  for (const auto& c : m.constraints()) {
    out << " " << c.name << ": ";
    write_terms(c.terms);
    out << (c.sense == Sense::kLe ? " <= " : c.sense == Sense::kGe ? " >= " : " = ") << c.rhs << "\n";
  }
  out << "Binary\n";
  for (int v = 0; v < m.variable_count(); ++v) out << " " << m.name(v) << "\n";
  out << "End\n";
  if (!out) fail(ErrorKind::kIo, "failed to write LP model");
}

inline std::string export_lp(const IlpModel& m) {
  std::ostringstream out;
  export_lp(m, out);
  return out.str();
}

}  // namespace geophylo
