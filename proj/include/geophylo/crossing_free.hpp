#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "geophylo/crossings.hpp"
#include "geophylo/leaf_order.hpp"
#include "geophylo/pairs.hpp"

namespace geophylo {

namespace detail {

/// Embeddings of one subtree at one start position, free of crossings among
/// its own leaders, keyed by the set of (outside leaf, outside position)
/// placements their leaders would block. Two embeddings with the same key
/// extend to exactly the same crossing-free drawings, so one is kept per key.
class CrossingFreeDp {
 public:
  using Signature = std::vector<std::uint64_t>;
  using Cell = std::map<Signature, std::vector<LeafId>>;

  CrossingFreeDp(const Geophylogeny& g, LeaderType type) : g_(g), t_(g.tree()), pa_(g, type), n_(g.n()) {
    words_ = (static_cast<std::size_t>(n_) * n_ + 63) / 64;
  }

  std::optional<LeafOrder> run() {
    cells_.assign(t_.vertex_count(), {});
    for (VertexId v : t_.postorder()) {
      const int slots = n_ - t_.size(v) + 1;
      cells_[v].assign(slots, {});
      for (int i = 1; i <= slots; ++i) fill(v, i);
      if (!t_.is_leaf(v)) {
        // children are no longer needed
        cells_[t_.left(v)].clear();
        cells_[t_.right(v)].clear();
      }
    }
    const Cell& top = cells_[t_.root()][0];
    if (top.empty()) return std::nullopt;
    return LeafOrder::from_sequence(t_, top.begin()->second);
  }

 private:
  bool test(const Signature& s, LeafId o, int a) const {
    const std::size_t bit = static_cast<std::size_t>(o) * n_ + (a - 1);
    return (s[bit >> 6] >> (bit & 63)) & 1;
  }
  static void set(Signature& s, std::size_t bit) { s[bit >> 6] |= std::uint64_t{1} << (bit & 63); }

  bool outside(VertexId v, int i, LeafId o, int a) const {
    return !t_.in_clade(v, o) && (a < i || a >= i + t_.size(v));
  }

  /// Drops bits that are no longer outside and rejects embeddings that leave
  /// some outside leaf without a free position.
  bool finish(VertexId v, int i, Signature& s) const {
    Signature masked(words_, 0);
    for (LeafId o = 0; o < n_; ++o) {
      if (t_.in_clade(v, o)) continue;
      bool free = false;
      for (int a = 1; a <= n_; ++a) {
        if (a >= i && a < i + t_.size(v)) continue;
        if (test(s, o, a)) set(masked, static_cast<std::size_t>(o) * n_ + (a - 1));
        else free = true;
      }
      if (!free) return false;
    }
    s = std::move(masked);
    return true;
  }

  void fill(VertexId v, int i) {
    Cell& cell = cells_[v][i - 1];
    if (t_.is_leaf(v)) {
      Signature s(words_, 0);
      for (LeafId o = 0; o < n_; ++o)
        for (int a = 1; a <= n_; ++a)
          if (outside(v, i, o, a) && pa_.cross(v, i, o, a)) set(s, static_cast<std::size_t>(o) * n_ + (a - 1));
      if (finish(v, i, s)) cell.emplace(std::move(s), std::vector<LeafId>{v});
      return;
    }
    for (int r = 0; r <= 1; ++r) {
      const VertexId first = r ? t_.right(v) : t_.left(v), second = r ? t_.left(v) : t_.right(v);
      const int j = i + t_.size(first);
      for (const auto& [s1, e1] : cells_[first][i - 1])
        for (const auto& [s2, e2] : cells_[second][j - 1]) {
          bool ok = true;
          for (std::size_t k = 0; k < e2.size() && ok; ++k) ok = !test(s1, e2[k], j + static_cast<int>(k));
          if (!ok) continue;
          Signature s(words_);
          for (std::size_t w = 0; w < words_; ++w) s[w] = s1[w] | s2[w];
          if (!finish(v, i, s) || cell.count(s)) continue;
          std::vector<LeafId> e = e1;
          e.insert(e.end(), e2.begin(), e2.end());
          cell.emplace(std::move(s), std::move(e));
        }
    }
  }

  const Geophylogeny& g_;
  const PhyloTree& t_;
  PairAnalysis pa_;
  int n_;
  std::size_t words_ = 0;
  std::vector<std::vector<Cell>> cells_;
};

}  // namespace detail

/// A leaf order without leader crossings, if one exists.
inline std::optional<LeafOrder> decide_crossing_free(const Geophylogeny& g, LeaderType type) {
  if (g.n() == 1) return LeafOrder::neutral(g.tree());
  return detail::CrossingFreeDp(g, type).run();
}

}  // namespace geophylo
