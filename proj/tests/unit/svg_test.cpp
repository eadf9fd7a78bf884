#include <gtest/gtest.h>

#include "geophylo/branch_bound.hpp"
#include "geophylo/io.hpp"
#include "geophylo/svg.hpp"
#include "support.hpp"

using namespace geophylo;

namespace {

int occurrences(const std::string& s, const std::string& what) {
  int count = 0;
  for (std::size_t p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++count;
  return count;
}

}  // namespace

TEST(Svg, T3HasThreeLeaders) {
  const Geophylogeny g = testing_support::t3();
  const LeafOrder order = solve_exact(build_ilp(g, LeaderType::kS)).order;
  const std::string svg = render_svg(g, order);
  EXPECT_EQ(occurrences(svg, "<path class=\"leader"), 3);
  EXPECT_EQ(occurrences(svg, "<circle"), 3);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
}

TEST(Svg, HighlightsCrossingLeaders) {
  const Geophylogeny g = testing_support::t3();
  const LeafOrder order = LeafOrder::from_labels(g.tree(), {"l3", "l1", "l2"});
  ASSERT_EQ(count_crossings(g, order, LeaderType::kS), 2);
  RenderOptions opt;
  opt.highlight_crossings = true;
  const std::string svg = render_svg(g, order, opt);
  EXPECT_GE(occurrences(svg, "leader crossing"), 2);
}

TEST(Svg, InternalModeColoursMatch) {
  const Geophylogeny g = testing_support::t3();
  RenderOptions opt;
  opt.leaders = std::nullopt;
  const std::string svg = render_svg(g, LeafOrder::neutral(g.tree()), opt);
  EXPECT_EQ(occurrences(svg, "<path class=\"leader"), 0);
  for (const char* c : {"#1f77b4", "#ff7f0e", "#2ca02c"}) EXPECT_EQ(occurrences(svg, c), 2) << c;
}

TEST(Svg, Deterministic) {
  const Geophylogeny g = read_instance_file(std::string(GEOPHYLO_DATA_DIR) + "/t3.geo");
  const LeafOrder order = LeafOrder::neutral(g.tree());
  EXPECT_EQ(render_svg(g, order), render_svg(g, order));
}

TEST(Svg, Golden) {
  const Geophylogeny g = read_instance_file(std::string(GEOPHYLO_DATA_DIR) + "/t3.geo");
  const LeafOrder order = LeafOrder::from_labels(g.tree(), {"l2", "l1", "l3"});
  RenderOptions opt;
  opt.highlight_crossings = true;
  EXPECT_EQ(render_svg(g, order, opt), read_text_file(std::string(GEOPHYLO_GOLDEN_DIR) + "/t3_s.svg"));
}
