#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "geophylo/error.hpp"
#include "geophylo/tree.hpp"

namespace geophylo {

/// Realizable leaf order, stored both as rotation bits (relative to the
/// neutral embedding) and as the induced permutation. Positions are 1-based.
class LeafOrder {
 public:
  LeafOrder() = default;

  static LeafOrder neutral(const PhyloTree& tree) {
    return from_rotations(tree, std::vector<std::uint8_t>(static_cast<std::size_t>(tree.internal_count()), 0));
  }

  /// rotations[k] is the bit of internal vertex tree.internal_vertex(k).
  static LeafOrder from_rotations(const PhyloTree& tree, std::vector<std::uint8_t> rotations) {
    if (static_cast<int>(rotations.size()) != tree.internal_count())
      fail(ErrorKind::kInvalidInput, "rotation vector has wrong length");
    LeafOrder o;
    o.rot_ = std::move(rotations);
    o.layout(tree);
    return o;
  }

  /// Left-to-right leaf sequence; throws if some clade is not contiguous.
  static LeafOrder from_sequence(const PhyloTree& tree, const std::vector<LeafId>& sequence) {
    const int n = tree.leaf_count();
    if (static_cast<int>(sequence.size()) != n) fail(ErrorKind::kInvalidInput, "leaf order has wrong length");
    std::vector<int> pos(n, 0);
    for (int k = 0; k < n; ++k) {
      LeafId leaf = sequence[k];
      if (leaf < 0 || leaf >= n || pos[leaf] != 0) fail(ErrorKind::kInvalidInput, "leaf order is not a permutation");
      pos[leaf] = k + 1;
    }
    std::vector<int> lo(tree.vertex_count()), hi(tree.vertex_count());
    std::vector<std::uint8_t> rot(static_cast<std::size_t>(tree.internal_count()), 0);
    for (VertexId v : tree.postorder()) {
      if (tree.is_leaf(v)) {
        lo[v] = hi[v] = pos[v];
        continue;
      }
      VertexId l = tree.left(v), r = tree.right(v);
      lo[v] = std::min(lo[l], lo[r]);
      hi[v] = std::max(hi[l], hi[r]);
      if (hi[v] - lo[v] + 1 != tree.size(v)) {
        fail(ErrorKind::kInvalidInput, "leaf order not realizable: clade of vertex " + std::to_string(v) + " (" +
                                           describe_clade(tree, v) + ") is not contiguous");
      }
      rot[tree.internal_index(v)] = lo[l] > lo[r] ? 1 : 0;
    }
    return from_rotations(tree, std::move(rot));
  }

  static LeafOrder from_labels(const PhyloTree& tree, const std::vector<std::string>& labels) {
    std::vector<LeafId> seq;
    for (const auto& label : labels) {
      auto leaf = tree.find_leaf(label);
      if (!leaf) fail(ErrorKind::kInvalidInput, "unknown leaf label '" + label + "'");
      seq.push_back(*leaf);
    }
    return from_sequence(tree, seq);
  }

  int size() const { return static_cast<int>(seq_.size()); }
  bool rotated(const PhyloTree& tree, VertexId v) const { return rot_[tree.internal_index(v)] != 0; }
  const std::vector<std::uint8_t>& rotations() const { return rot_; }
  /// 1-based position of a leaf.
  int position(LeafId leaf) const { return pos_[leaf]; }
  /// Leaf at 1-based position.
  LeafId at(int position) const { return seq_[position - 1]; }
  const std::vector<LeafId>& sequence() const { return seq_; }
  /// Leftmost position occupied by the clade of v.
  int start(VertexId v) const { return start_[v]; }

  LeafOrder with_rotation(const PhyloTree& tree, VertexId v, bool rotated) const {
    std::vector<std::uint8_t> rot = rot_;
    rot[tree.internal_index(v)] = rotated ? 1 : 0;
    return from_rotations(tree, std::move(rot));
  }
  LeafOrder toggled(const PhyloTree& tree, VertexId v) const { return with_rotation(tree, v, !rotated(tree, v)); }

  std::vector<std::string> labels(const PhyloTree& tree) const {
    std::vector<std::string> out;
    for (LeafId leaf : seq_) out.push_back(tree.label(leaf));
    return out;
  }

  friend bool operator==(const LeafOrder& a, const LeafOrder& b) { return a.seq_ == b.seq_; }

  static std::string describe_clade(const PhyloTree& tree, VertexId v) {
    std::string out;
    for (LeafId l = tree.first_leaf(v); l < tree.first_leaf(v) + tree.size(v); ++l) {
      if (!out.empty()) out += ",";
      if (out.size() > 60) return out + "...";
      out += tree.label(l);
    }
    return out;
  }

 private:
  void layout(const PhyloTree& tree) {
    const int n = tree.leaf_count();
    seq_.assign(n, 0);
    pos_.assign(n, 0);
    start_.assign(tree.vertex_count(), 0);
    start_[tree.root()] = 1;
    for (VertexId v : tree.preorder()) {
      if (tree.is_leaf(v)) {
        pos_[v] = start_[v];
        seq_[start_[v] - 1] = v;
        continue;
      }
      VertexId first = tree.left(v), second = tree.right(v);
      if (rot_[tree.internal_index(v)]) std::swap(first, second);
      start_[first] = start_[v];
      start_[second] = start_[v] + tree.size(first);
    }
  }

  std::vector<std::uint8_t> rot_;
  std::vector<int> pos_;
  std::vector<LeafId> seq_;
  std::vector<int> start_;
};

}  // namespace geophylo
