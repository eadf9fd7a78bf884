#pragma once

#include <cctype>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geophylo/error.hpp"

namespace geophylo {

using VertexId = int;
using LeafId = int;
inline constexpr VertexId kNoVertex = -1;

/// Rooted binary phylogenetic tree with a fixed neutral embedding.
///
/// Leaves are numbered 0..n-1 from left to right in the neutral embedding,
/// so every clade is the contiguous id range [first_leaf(v), first_leaf(v) + size(v)).
/// Internal vertices are numbered n..2n-2 in post-order; the root is 2n-2
/// (or 0 for a single-leaf tree).
class PhyloTree {
 public:
  /// Incremental construction used by parsers and generators.
  class Builder {
   public:
    int leaf(std::string label) {
      nodes_.push_back({std::move(label), -1, -1});
      return static_cast<int>(nodes_.size()) - 1;
    }
    int join(int left, int right) {
      nodes_.push_back({{}, left, right});
      return static_cast<int>(nodes_.size()) - 1;
    }
    PhyloTree build(int root) const;

   private:
    struct RawNode {
      std::string label;
      int left;
      int right;
    };
    std::vector<RawNode> nodes_;
  };

  PhyloTree() = default;

  static PhyloTree from_newick(std::string_view text);
  std::string to_newick() const;

  int leaf_count() const { return n_; }
  int vertex_count() const { return static_cast<int>(parent_.size()); }
  int internal_count() const { return n_ - 1; }
  VertexId root() const { return root_; }
  bool is_leaf(VertexId v) const { return v < n_; }
  VertexId left(VertexId v) const { return left_[v]; }
  VertexId right(VertexId v) const { return right_[v]; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  /// n(v): number of leaves below v.
  int size(VertexId v) const { return size_[v]; }
  LeafId first_leaf(VertexId v) const { return first_leaf_[v]; }
  bool in_clade(VertexId v, LeafId leaf) const { return first_leaf_[v] <= leaf && leaf < first_leaf_[v] + size_[v]; }
  /// Dense index of an internal vertex in [0, n-1).
  int internal_index(VertexId v) const { return v - n_; }
  VertexId internal_vertex(int index) const { return index + n_; }

  const std::string& label(LeafId leaf) const { return labels_[leaf]; }
  std::optional<LeafId> find_leaf(std::string_view label) const {
    auto it = by_label_.find(std::string(label));
    if (it == by_label_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const VertexId> preorder() const { return preorder_; }
  std::span<const VertexId> postorder() const { return postorder_; }

  VertexId lca(LeafId a, LeafId b) const { return a == b ? a : lca_[a * n_ + b]; }

  /// Internal ancestors of a leaf, nearest first.
  std::vector<VertexId> ancestors(LeafId leaf) const {
    std::vector<VertexId> out;
    for (VertexId v = parent_[leaf]; v != kNoVertex; v = parent_[v]) out.push_back(v);
    return out;
  }

 private:
  void finalize();

  int n_ = 0;
  VertexId root_ = kNoVertex;
  std::vector<VertexId> left_, right_, parent_;
  std::vector<int> size_, first_leaf_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, LeafId> by_label_;
  std::vector<VertexId> preorder_, postorder_;
  std::vector<VertexId> lca_;
};

inline PhyloTree PhyloTree::Builder::build(int root) const {
  PhyloTree t;
  // count leaves reachable from root and lay them out left to right
  std::vector<int> leaf_nodes;
  std::vector<int> internal_post;
  {
    // iterative post-order over the raw nodes
    std::vector<std::pair<int, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [u, expanded] = stack.back();
      stack.pop_back();
      const RawNode& node = nodes_.at(u);
      if (node.left < 0) {
        leaf_nodes.push_back(u);
        continue;
      }
      if (expanded) {
        internal_post.push_back(u);
      } else {
        stack.push_back({u, true});
        stack.push_back({node.right, false});
        stack.push_back({node.left, false});
      }
    }
  }
  const int n = static_cast<int>(leaf_nodes.size());
  t.n_ = n;
  const int total = 2 * n - 1;
  t.left_.assign(total, kNoVertex);
  t.right_.assign(total, kNoVertex);
  t.parent_.assign(total, kNoVertex);
  t.labels_.resize(n);
  std::unordered_map<int, VertexId> id_of;
  for (int i = 0; i < n; ++i) {
    id_of[leaf_nodes[i]] = i;
    t.labels_[i] = nodes_[leaf_nodes[i]].label;
    if (t.labels_[i].empty()) fail(ErrorKind::kInvalidInput, "leaf without label");
    if (!t.by_label_.emplace(t.labels_[i], i).second)
      fail(ErrorKind::kInvalidInput, "duplicate leaf label '" + t.labels_[i] + "'");
  }
  for (std::size_t k = 0; k < internal_post.size(); ++k) id_of[internal_post[k]] = n + static_cast<int>(k);
  for (int u : internal_post) {
    VertexId v = id_of[u];
    t.left_[v] = id_of[nodes_[u].left];
    t.right_[v] = id_of[nodes_[u].right];
    t.parent_[t.left_[v]] = v;
    t.parent_[t.right_[v]] = v;
  }
  t.root_ = id_of[root];
  t.finalize();
  return t;
}

inline void PhyloTree::finalize() {
  const int total = vertex_count();
  size_.assign(total, 0);
  first_leaf_.assign(total, 0);
  postorder_.clear();
  preorder_.clear();
  for (VertexId v = 0; v < n_; ++v) {
    size_[v] = 1;
    first_leaf_[v] = v;
  }
  std::vector<std::pair<VertexId, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    if (is_leaf(v) || expanded) {
      if (is_leaf(v)) preorder_.push_back(v);
      postorder_.push_back(v);
      continue;
    }
    preorder_.push_back(v);
    stack.push_back({v, true});
    stack.push_back({right_[v], false});
    stack.push_back({left_[v], false});
  }
  for (VertexId v : postorder_) {
    if (is_leaf(v)) continue;
    size_[v] = size_[left_[v]] + size_[right_[v]];
    first_leaf_[v] = first_leaf_[left_[v]];
  }
  lca_.assign(static_cast<std::size_t>(n_) * n_, kNoVertex);
  for (VertexId v = n_; v < total; ++v) {
    VertexId l = left_[v], r = right_[v];
    for (LeafId a = first_leaf_[l]; a < first_leaf_[l] + size_[l]; ++a)
      for (LeafId b = first_leaf_[r]; b < first_leaf_[r] + size_[r]; ++b) {
        lca_[a * n_ + b] = v;
        lca_[b * n_ + a] = v;
      }
  }
}

namespace detail {

inline bool newick_plain_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' && c != ':' && c != ';' &&
         c != '[' && c != ']' && c != '\'';
}

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  PhyloTree parse() {
    skip();
    int root = subtree();
    skip();
    if (peek() != ';') error("expected ';'");
    ++pos_;
    skip();
    if (pos_ != text_.size()) error("trailing characters after ';'");
    return builder_.build(root);
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::kInvalidInput, "malformed tree string at offset " + std::to_string(pos_) + ": " + msg);
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '[') {
        auto end = text_.find(']', pos_);
        if (end == std::string_view::npos) error("unterminated comment");
        pos_ = end + 1;
      } else {
        break;
      }
    }
  }
  std::string label() {
    skip();
    std::string out;
    if (peek() == '\'') {
      ++pos_;
      while (true) {
        if (pos_ >= text_.size()) error("unterminated quoted label");
        char c = text_[pos_++];
        if (c == '\'') {
          if (peek() == '\'') {
            out.push_back('\'');
            ++pos_;
            continue;
          }
          break;
        }
        out.push_back(c);
      }
    } else {
      while (pos_ < text_.size() && newick_plain_char(text_[pos_])) out.push_back(text_[pos_++]);
    }
    skip();
    if (peek() == ':') {  // branch length, ignored
      ++pos_;
      skip();
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                                     text_[pos_] == '-' || text_[pos_] == '+' || text_[pos_] == 'e' ||
                                     text_[pos_] == 'E'))
        ++pos_;
      if (start == pos_) error("missing branch length");
      skip();
    }
    return out;
  }
  int subtree() {
    skip();
    if (peek() == '(') {
      ++pos_;
      int a = subtree();
      skip();
      if (peek() != ',') error(peek() == ')' ? "vertex with one child" : "expected ','");
      ++pos_;
      int b = subtree();
      skip();
      if (peek() == ',') error("non-binary vertex (more than two children)");
      if (peek() != ')') error("expected ')'");
      ++pos_;
      label();  // internal labels are ignored
      return builder_.join(a, b);
    }
    std::string name = label();
    if (name.empty()) error("empty leaf label");
    return builder_.leaf(std::move(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  PhyloTree::Builder builder_;
};

inline std::string newick_label(const std::string& label) {
  bool plain = !label.empty();
  for (char c : label) plain = plain && newick_plain_char(c);
  if (plain) return label;
  std::string out = "'";
  for (char c : label) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  return out + "'";
}

}  // namespace detail

inline PhyloTree PhyloTree::from_newick(std::string_view text) { return detail::NewickParser(text).parse(); }

inline std::string PhyloTree::to_newick() const {
  std::string out;
  auto emit = [&](auto&& self, VertexId v) -> void {
    if (is_leaf(v)) {
      out += detail::newick_label(labels_[v]);
      return;
    }
    out.push_back('(');
    self(self, left_[v]);
    out.push_back(',');
    self(self, right_[v]);
    out.push_back(')');
  };
  emit(emit, root_);
  return out + ";";
}

}  // namespace geophylo
