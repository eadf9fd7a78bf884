#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geophylo/decimal.hpp"
#include "geophylo/error.hpp"
#include "geophylo/geometry.hpp"
#include "geophylo/tree.hpp"

namespace geophylo {

enum class LayoutKind { kEven, kExplicit };

/// Leaf positions on the top edge. kEven spreads X(1..n) over [0, width];
/// kExplicit lists every X. ytop defaults to the map height.
struct Layout {
  LayoutKind kind = LayoutKind::kEven;
  std::vector<Decimal> positions;
  std::optional<Decimal> ytop;

  static Layout even() { return {}; }
  static Layout explicit_positions(std::vector<Decimal> xs, std::optional<Decimal> ytop = std::nullopt) {
    return {LayoutKind::kExplicit, std::move(xs), ytop};
  }
  /// X(i) = i.
  static Layout identity(int n, std::optional<Decimal> ytop = std::nullopt) {
    std::vector<Decimal> xs;
    for (int i = 1; i <= n; ++i) xs.push_back(Decimal::from_int(i));
    return explicit_positions(std::move(xs), ytop);
  }
};

/// Tree, map rectangle, one site per leaf and a layout.
///
/// All coordinates are converted once into an integer frame: every input
/// decimal is multiplied by scale() (a power of ten, times n-1 for even
/// layouts so that evenly spaced positions stay integral). Predicates on the
/// frame are exact.
class Geophylogeny {
 public:
  static constexpr std::int64_t kMaxMagnitude = std::int64_t{1} << 40;

  Geophylogeny() = default;

  Geophylogeny(PhyloTree tree, Decimal width, Decimal height, std::vector<Decimal> site_x, std::vector<Decimal> site_y,
               Layout layout = Layout::even())
      : tree_(std::move(tree)),
        width_text_(width),
        height_text_(height),
        site_x_text_(std::move(site_x)),
        site_y_text_(std::move(site_y)),
        layout_(std::move(layout)) {
    build_frame();
  }

  const PhyloTree& tree() const { return tree_; }
  int n() const { return tree_.leaf_count(); }

  const Point& site(LeafId leaf) const { return sites_[leaf]; }
  /// x-coordinate of 1-based position i.
  Coord X(int position) const { return xs_[position - 1]; }
  Coord ytop() const { return ytop_; }
  Point anchor(int position) const { return {xs_[position - 1], ytop_}; }
  Coord width() const { return width_; }
  Coord height() const { return height_; }
  /// Frame units per map unit.
  std::int64_t scale() const { return scale_; }
  /// True if consecutive positions are equally spaced.
  bool uniform_layout() const { return uniform_; }

  double to_map(Coord v) const { return static_cast<double>(v) / static_cast<double>(scale_); }

  const Decimal& width_text() const { return width_text_; }
  const Decimal& height_text() const { return height_text_; }
  const Decimal& site_x_text(LeafId leaf) const { return site_x_text_[leaf]; }
  const Decimal& site_y_text(LeafId leaf) const { return site_y_text_[leaf]; }
  const Layout& layout() const { return layout_; }

 private:
  void build_frame() {
    const int n = tree_.leaf_count();
    if (n < 1) fail(ErrorKind::kInvalidInput, "tree has no leaves");
    if (static_cast<int>(site_x_text_.size()) != n || static_cast<int>(site_y_text_.size()) != n)
      fail(ErrorKind::kInvalidInput, "site count does not match leaf count");
    if (compare(width_text_, Decimal()) <= 0 || compare(height_text_, Decimal()) <= 0)
      fail(ErrorKind::kInvalidInput, "map width and height must be positive");
    if (layout_.kind == LayoutKind::kExplicit && static_cast<int>(layout_.positions.size()) != n)
      fail(ErrorKind::kInvalidInput, "layout lists " + std::to_string(layout_.positions.size()) +
                                         " positions for " + std::to_string(n) + " leaves");

    int s = std::max(width_text_.scale(), height_text_.scale());
    for (const auto& d : site_x_text_) s = std::max(s, d.scale());
    for (const auto& d : site_y_text_) s = std::max(s, d.scale());
    for (const auto& d : layout_.positions) s = std::max(s, d.scale());
    if (layout_.ytop) s = std::max(s, layout_.ytop->scale());
    std::int64_t mult = (layout_.kind == LayoutKind::kEven && n > 1) ? n - 1 : 1;

    auto conv = [&](const Decimal& d) {
      std::int64_t v = d.scaled_to(s);
      if (v > kMaxMagnitude / mult || v < -kMaxMagnitude / mult)
        fail(ErrorKind::kInvalidInput, "coordinate " + d.str() + " too large for the exact frame");
      return v * mult;
    };
    scale_ = mult;
    for (int k = 0; k < s; ++k) scale_ *= 10;
    width_ = conv(width_text_);
    height_ = conv(height_text_);
    sites_.resize(n);
    for (int i = 0; i < n; ++i) {
      sites_[i] = {conv(site_x_text_[i]), conv(site_y_text_[i])};
      if (sites_[i].x < 0 || sites_[i].x > width_ || sites_[i].y < 0 || sites_[i].y > height_) {
        fail(ErrorKind::kInvalidInput, "site of leaf '" + tree_.label(i) + "' (" + site_x_text_[i].str() + ", " +
                                           site_y_text_[i].str() + ") lies outside the map");
      }
    }
    xs_.resize(n);
    if (layout_.kind == LayoutKind::kEven) {
      for (int i = 0; i < n; ++i) xs_[i] = n > 1 ? width_ / (n - 1) * i : 0;
    } else {
      for (int i = 0; i < n; ++i) xs_[i] = conv(layout_.positions[i]);
    }
    for (int i = 1; i < n; ++i)
      if (xs_[i] <= xs_[i - 1]) fail(ErrorKind::kInvalidInput, "layout positions must be strictly increasing");
    ytop_ = layout_.ytop ? conv(*layout_.ytop) : height_;
    if (ytop_ < height_) fail(ErrorKind::kInvalidInput, "ytop lies below the map's upper boundary");
    uniform_ = true;
    for (int i = 2; i < n; ++i) uniform_ = uniform_ && (xs_[i] - xs_[i - 1] == xs_[1] - xs_[0]);
  }

  PhyloTree tree_;
  Decimal width_text_, height_text_;
  std::vector<Decimal> site_x_text_, site_y_text_;
  Layout layout_;

  std::int64_t scale_ = 1;
  Coord width_ = 0, height_ = 0, ytop_ = 0;
  std::vector<Point> sites_;
  std::vector<Coord> xs_;
  bool uniform_ = true;
};

}  // namespace geophylo
