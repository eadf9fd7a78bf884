#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "geophylo/branch_bound.hpp"
#include "geophylo/maxcut.hpp"

using namespace geophylo;

namespace {

MaxCutInput k3(int c) { return parse_graph("1 2\n1 3\n2 3\n", c); }
MaxCutInput c4(int c) { return parse_graph("1 2\n2 3\n3 4\n1 4\n", c); }
MaxCutInput k4(int c) { return parse_graph("1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n", c); }

int cut_size(const MaxCutInput& in, unsigned side) {
  int cut = 0;
  for (auto [u, v] : in.edges) cut += ((side >> (u - 1)) & 1) != ((side >> (v - 1)) & 1);
  return cut;
}

// Vertices in side B swap their two subtrees; each subtree is read in the
// order that keeps its own leaders apart on its side.
LeafOrder partition_order(const MaxCutInstance& mi, const MaxCutInput& in, unsigned side) {
  const PhyloTree& t = mi.geophylogeny.tree();
  std::vector<LeafId> seq = LeafOrder::neutral(t).sequence();
  for (int v = 1; v <= in.vertices; ++v) {
    if (!((side >> (v - 1)) & 1)) continue;
    auto block = [&](char tag) {
      const std::string prefix = std::string(1, tag) + std::to_string(v) + "_";
      auto first = std::find_if(seq.begin(), seq.end(), [&](LeafId l) { return t.label(l).rfind(prefix, 0) == 0; });
      auto last = std::find_if(first, seq.end(), [&](LeafId l) { return t.label(l).rfind(prefix, 0) != 0; });
      return std::pair{first, last};
    };
    auto [x0, x1] = block('x');
    auto [y0, y1] = block('y');
    std::vector<LeafId> xs(x0, x1), ys(y0, y1);
    EXPECT_EQ(xs.size(), ys.size());
    std::copy(ys.rbegin(), ys.rend(), x0);
    std::copy(xs.rbegin(), xs.rend(), y0);
  }
  return LeafOrder::from_sequence(t, seq);
}

}  // namespace

TEST(MaxCut, TriangleThreshold) {
  const MaxCutInstance mi = build_maxcut_instance(k3(2), LeaderType::kPO);
  EXPECT_EQ(mi.k_fix, 9);
  EXPECT_EQ(mi.k_threshold, 13);
  EXPECT_EQ(mi.d, 4);
  EXPECT_EQ(mi.units, 1);
}

TEST(MaxCut, BruteForceCut) {
  EXPECT_EQ(brute_force_maxcut(normalize(k3(0))), 2);
  EXPECT_EQ(brute_force_maxcut(normalize(c4(0))), 4);
  EXPECT_EQ(brute_force_maxcut(normalize(k4(0))), 4);
}

TEST(MaxCut, RejectsBadGraphs) {
  auto kind = [](const std::string& text) {
    try {
      build_maxcut_instance(parse_graph(text, 1), LeaderType::kPO);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;
  };
  EXPECT_EQ(kind("1 2\n2 3\n1 3\n3 4\n"), ErrorKind::kInvalidInput);  // pendant vertex 4
  EXPECT_EQ(kind("1 2\n2 1\n1 3\n2 3\n"), ErrorKind::kInvalidInput);  // duplicate edge
  EXPECT_EQ(kind("1 1\n1 2\n2 3\n1 3\n"), ErrorKind::kInvalidInput);  // loop
  EXPECT_EQ(kind("1 2\n1 2\n"), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind("1 2 3\n"), ErrorKind::kInvalidInput);
}

TEST(MaxCut, StructureAndPlacement) {
  const MaxCutInput in = k3(1);
  const MaxCutInstance mi = build_maxcut_instance(in, LeaderType::kPO);
  const Geophylogeny& g = mi.geophylogeny;
  // 4 leaves per edge, 7 fixing gadgets of 2 units of 4 leaves
  EXPECT_EQ(g.n(), 12 + 7 * 2 * 4);
  // cut 0 in the neutral order; nothing is moved
  EXPECT_EQ(count_crossings(g, LeafOrder::neutral(g.tree()), LeaderType::kPO), mi.k_fix + 2 * mi.m);
}

// Every vertex partition costs k_fix + 2m - (cut size) with the fixing
// gadgets in place.
TEST(MaxCut, PartitionOrdersCountCutEdges) {
  for (LeaderType type : {LeaderType::kPO, LeaderType::kS})
    for (const MaxCutInput& raw : {k3(2), c4(3), k4(4)}) {
      const MaxCutInput in = normalize(raw);
      const MaxCutInstance mi = build_maxcut_instance(in, type);
      for (unsigned side = 0; side < (1u << in.vertices); ++side) {
        const LeafOrder order = partition_order(mi, in, side);
        EXPECT_EQ(count_crossings(mi.geophylogeny, order, type), mi.k_fix + 2 * mi.m - cut_size(in, side))
            << "side mask " << side;
      }
    }
}

// Small cases; the acceptance binary runs the full list.
TEST(MaxCut, OptimumMatchesMaxCut) {
  struct Case {
    MaxCutInput in;
    LeaderType type;
  };
  for (const Case& cs : {Case{k3(2), LeaderType::kPO}, Case{k3(3), LeaderType::kPO}, Case{c4(3), LeaderType::kPO},
                         Case{c4(4), LeaderType::kPO}, Case{k3(2), LeaderType::kS}}) {
    const MaxCutInstance mi = build_maxcut_instance(cs.in, cs.type);
    const int best = brute_force_maxcut(normalize(cs.in));
    const ExactResult r = solve_exact(build_ilp(mi.geophylogeny, cs.type));
    ASSERT_TRUE(r.optimal);
    EXPECT_EQ(r.crossings, mi.k_fix + 2 * mi.m - best);
    EXPECT_EQ(r.crossings <= mi.k_threshold, best >= cs.in.c);
  }
}

TEST(MaxCut, ParsesComments) {
  const MaxCutInput in = parse_graph("# triangle\n1 2\n\n2 3 # edge\n3 1\n", 2);
  EXPECT_EQ(in.vertices, 3);
  EXPECT_EQ(in.edges.size(), 3u);
}
