#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geophylo/crossings.hpp"
#include "geophylo/decimal.hpp"
#include "geophylo/error.hpp"
#include "geophylo/geophylogeny.hpp"
#include "geophylo/tree.hpp"

namespace geophylo {

// Instance document, one directive per line, '#' starts a comment line:
//
//   tree ((l1,l2),l3);
//   map 4 3
//   layout even            (or: layout explicit 1 2 3)
//   ytop 3.5               (optional)
//   site l1 1 1
//
// Labels follow the Newick quoting rules.

namespace detail {

class LineReader {
 public:
  LineReader(std::string_view line, int lineno) : s_(line), lineno_(lineno) {}

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::kInvalidInput, "line " + std::to_string(lineno_) + ": " + msg);
  }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= s_.size();
  }
  std::string rest() {
    skip_space();
    std::string out(s_.substr(pos_));
    while (!out.empty() && (out.back() == ' ' || out.back() == '\t' || out.back() == '\r')) out.pop_back();
    pos_ = s_.size();
    return out;
  }
  std::string word(const char* what) {
    skip_space();
    if (pos_ >= s_.size()) error(std::string("expected ") + what);
    if (s_[pos_] == '\'') {
      std::string out;
      ++pos_;
      while (true) {
        if (pos_ >= s_.size()) error("unterminated quoted label");
        if (s_[pos_] == '\'') {
          if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
            out.push_back('\'');
            pos_ += 2;
            continue;
          }
          ++pos_;
          return out;
        }
        out.push_back(s_[pos_++]);
      }
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '\r') ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }
  Decimal number(const char* what) {
    const std::string w = word(what);
    try {
      return Decimal::parse(w);
    } catch (const Error&) {
      error(std::string("bad ") + what + " '" + w + "'");
    }
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int lineno_;
};

}  // namespace detail

inline Geophylogeny read_instance(std::string_view text) {
  std::optional<PhyloTree> tree;
  std::optional<std::pair<Decimal, Decimal>> map;
  Layout layout = Layout::even();
  struct SiteLine {
    std::string label;
    Decimal x, y;
    int lineno;
  };
  std::vector<SiteLine> sites;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool have_layout = false, have_ytop = false;
  while (std::getline(in, line)) {
    ++lineno;
    detail::LineReader r(line, lineno);
    if (r.done()) continue;
    const std::string key = r.word("directive");
    if (key.front() == '#') continue;
    if (key == "tree") {
      if (tree) r.error("second tree directive");
      try {
        tree = PhyloTree::from_newick(r.rest());
      } catch (const Error& e) {
        r.error(e.what());
      }
    } else if (key == "map") {
      if (map) r.error("second map directive");
      Decimal w = r.number("map width"), h = r.number("map height");
      map = std::pair{w, h};
    } else if (key == "layout") {
      if (have_layout) r.error("second layout directive");
      have_layout = true;
      const std::string kind = r.word("layout kind");
      std::optional<Decimal> ytop = layout.ytop;
      if (kind == "even") {
        layout = Layout::even();
      } else if (kind == "explicit") {
        std::vector<Decimal> xs;
        while (!r.done()) xs.push_back(r.number("layout position"));
        layout = Layout::explicit_positions(std::move(xs));
      } else {
        r.error("unknown layout kind '" + kind + "'");
      }
      layout.ytop = ytop;
    } else if (key == "ytop") {
      if (have_ytop) r.error("second ytop directive");
      have_ytop = true;
      layout.ytop = r.number("ytop");
    } else if (key == "site") {
      SiteLine s;
      s.label = r.word("site label");
      s.x = r.number("site x");
      s.y = r.number("site y");
      s.lineno = lineno;
      sites.push_back(std::move(s));
    } else {
      r.error("unknown directive '" + key + "'");
    }
    if (!r.done()) r.error("trailing text");
  }
  if (!tree) fail(ErrorKind::kInvalidInput, "missing tree directive");
  if (!map) fail(ErrorKind::kInvalidInput, "missing map directive");
  const int n = tree->leaf_count();
  std::vector<Decimal> xs(n), ys(n);
  std::vector<bool> seen(n, false);
  for (const SiteLine& s : sites) {
    auto leaf = tree->find_leaf(s.label);
    if (!leaf)
      fail(ErrorKind::kInvalidInput, "line " + std::to_string(s.lineno) + ": site for unknown leaf '" + s.label + "'");
    if (seen[*leaf])
      fail(ErrorKind::kInvalidInput, "line " + std::to_string(s.lineno) + ": duplicate site for leaf '" + s.label + "'");
    seen[*leaf] = true;
    xs[*leaf] = s.x;
    ys[*leaf] = s.y;
  }
  for (LeafId l = 0; l < n; ++l)
    if (!seen[l]) fail(ErrorKind::kInvalidInput, "missing site for leaf '" + tree->label(l) + "'");
  return Geophylogeny(std::move(*tree), map->first, map->second, std::move(xs), std::move(ys), std::move(layout));
}

inline std::string write_instance(const Geophylogeny& g) {
  std::string out = "tree " + g.tree().to_newick() + "\n";
  out += "map " + g.width_text().str() + " " + g.height_text().str() + "\n";
  const Layout& lay = g.layout();
  if (lay.kind == LayoutKind::kEven) {
    out += "layout even\n";
  } else {
    out += "layout explicit";
    for (const Decimal& x : lay.positions) out += " " + x.str();
    out += "\n";
  }
  if (lay.ytop) out += "ytop " + lay.ytop->str() + "\n";
  for (LeafId l = 0; l < g.n(); ++l)
    out += "site " + detail::newick_label(g.tree().label(l)) + " " + g.site_x_text(l).str() + " " +
           g.site_y_text(l).str() + "\n";
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Geophylogeny read_instance_file(const std::string& path) { return read_instance(read_text_file(path)); }

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) fail(ErrorKind::kIo, "cannot write '" + path + "'");
}

/// One row of the results table shared by optimize and bench.
struct ResultRow {
  std::string instance;
  std::string solver;
  std::string leader;  // "s", "po" or "internal"
  std::int64_t crossings = 0;
  double runtime_ms = 0;
  std::int64_t k = -1;  // -1 when not computed
  bool optimal = false;
};

inline const char* kResultHeader = "instance\tsolver\tleader\tcrossings\truntime_ms\tk\toptimal";

inline std::string format_result(const ResultRow& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << r.instance << '\t' << r.solver << '\t' << r.leader << '\t' << r.crossings << '\t' << r.runtime_ms << '\t'
     << r.k << '\t' << (r.optimal ? 1 : 0);
  return os.str();
}

inline void write_results(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kResultHeader << '\n';
  for (const ResultRow& r : rows) os << format_result(r) << '\n';
}

}  // namespace geophylo
