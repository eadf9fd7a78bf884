#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <string_view>

#include "geophylo/error.hpp"
#include "geophylo/leaf_order.hpp"
#include "geophylo/tree.hpp"

namespace geophylo {

/// Interactive restrictions: allowed position interval per leaf and fixed
/// rotation bits per internal vertex.
class Constraints {
 public:
  struct Range {
    int lo;
    int hi;
  };

  void pin(const PhyloTree& tree, LeafId leaf, int position) { restrict(tree, leaf, position, position); }

  /// Intersects the allowed interval of a leaf with [lo, hi] (1-based).
  void restrict(const PhyloTree& tree, LeafId leaf, int lo, int hi) {
    const int n = tree.leaf_count();
    if (leaf < 0 || leaf >= n) fail(ErrorKind::kInvalidInput, "constraint on unknown leaf");
    if (lo < 1 || hi > n || lo > hi)
      fail(ErrorKind::kInvalidInput, "empty or out-of-range position set for leaf '" + tree.label(leaf) + "'");
    auto it = ranges_.find(leaf);
    if (it != ranges_.end()) {
      lo = std::max(lo, it->second.lo);
      hi = std::min(hi, it->second.hi);
      if (lo > hi) fail(ErrorKind::kInfeasible, "conflicting position sets for leaf '" + tree.label(leaf) + "'");
    }
    ranges_[leaf] = {lo, hi};
  }

  void fix_rotation(const PhyloTree& tree, VertexId v, bool rotated) {
    if (v < tree.leaf_count() || v >= tree.vertex_count())
      fail(ErrorKind::kInvalidInput, "rotation constraint on a non-internal vertex");
    auto it = rotations_.find(v);
    if (it != rotations_.end() && it->second != rotated)
      fail(ErrorKind::kInfeasible, "conflicting rotation constraints on vertex " + std::to_string(v));
    rotations_[v] = rotated;
  }

  bool allows(LeafId leaf, int position) const {
    auto it = ranges_.find(leaf);
    return it == ranges_.end() || (it->second.lo <= position && position <= it->second.hi);
  }
  /// -1 if free, otherwise the fixed bit.
  int rotation(VertexId v) const {
    auto it = rotations_.find(v);
    return it == rotations_.end() ? -1 : (it->second ? 1 : 0);
  }

  bool empty() const { return ranges_.empty() && rotations_.empty(); }
  const std::map<LeafId, Range>& ranges() const { return ranges_; }
  const std::map<VertexId, bool>& rotations() const { return rotations_; }

  bool satisfied_by(const PhyloTree& tree, const LeafOrder& order) const {
    for (const auto& [leaf, r] : ranges_)
      if (order.position(leaf) < r.lo || order.position(leaf) > r.hi) return false;
    for (const auto& [v, rot] : rotations_)
      if (order.rotated(tree, v) != rot) return false;
    return true;
  }

  /// Text form, one item per call:
  ///   "l3@1"        pin leaf l3 to position 1
  ///   "l1@2-4"      keep l1 within positions 2..4
  ///   "l1^l2=1"     rotate the lowest common ancestor of l1 and l2 (0 keeps it neutral)
  void add(const PhyloTree& tree, std::string_view item) {
    auto leaf_of = [&](std::string_view label) {
      auto leaf = tree.find_leaf(label);
      if (!leaf) fail(ErrorKind::kInvalidInput, "constraint names unknown leaf '" + std::string(label) + "'");
      return *leaf;
    };
    auto number = [&](std::string_view s) {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos || s.size() > 9)
        fail(ErrorKind::kInvalidInput, "malformed constraint '" + std::string(item) + "'");
      return std::stoi(std::string(s));
    };
    if (auto at = item.rfind('@'); at != std::string_view::npos) {
      LeafId leaf = leaf_of(item.substr(0, at));
      std::string_view rest = item.substr(at + 1);
      if (auto dash = rest.find('-'); dash != std::string_view::npos) {
        restrict(tree, leaf, number(rest.substr(0, dash)), number(rest.substr(dash + 1)));
      } else {
        pin(tree, leaf, number(rest));
      }
      return;
    }
    auto caret = item.find('^');
    auto eq = item.rfind('=');
    if (caret == std::string_view::npos || eq == std::string_view::npos || eq < caret)
      fail(ErrorKind::kInvalidInput, "malformed constraint '" + std::string(item) + "'");
    LeafId a = leaf_of(item.substr(0, caret));
    LeafId b = leaf_of(item.substr(caret + 1, eq - caret - 1));
    if (a == b) fail(ErrorKind::kInvalidInput, "rotation constraint needs two distinct leaves");
    std::string_view bit = item.substr(eq + 1);
    if (bit != "0" && bit != "1") fail(ErrorKind::kInvalidInput, "malformed constraint '" + std::string(item) + "'");
    fix_rotation(tree, tree.lca(a, b), bit == "1");
  }

 private:
  std::map<LeafId, Range> ranges_;
  std::map<VertexId, bool> rotations_;
};

}  // namespace geophylo
