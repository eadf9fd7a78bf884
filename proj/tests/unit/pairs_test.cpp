#include <gtest/gtest.h>

#include "geophylo/pairs.hpp"
#include "support.hpp"

using namespace geophylo;

TEST(PairAnalysis, CategoriesAgreeWithGeometry) {
  for (int seed = 0; seed < 300; ++seed) {
    Geophylogeny g = testing_support::random_grid_instance(seed, 2 + seed % 9, 3 + seed % 6, seed % 2);
    for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
      PairAnalysis pa(g, type);
      for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) {
          if (i == j) continue;
          for (int a = 1; a <= g.n(); ++a)
            for (int b = 1; b <= g.n(); ++b) {
              if (a == b) continue;
              ASSERT_EQ(pa.cross(i, a, j, b), leaders_cross(g, type, i, a, j, b))
                  << "seed " << seed << " " << to_string(type) << " pair " << i << "," << j << " kind "
                  << static_cast<int>(pa.info(i, j).kind);
            }
        }
    }
  }
}

TEST(PairAnalysis, ForcedMatchesBlockMinimum) {
  for (int seed = 0; seed < 200; ++seed) {
    Geophylogeny g = testing_support::random_grid_instance(400 + seed, 4 + seed % 6, 5, seed % 2);
    const int n = g.n();
    for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
      PairAnalysis pa(g, type);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          // every split of 1..n into two disjoint blocks
          for (int l1 = 1; l1 <= n; ++l1)
            for (int h1 = l1; h1 <= n; ++h1)
              for (int l2 = h1 + 1; l2 <= n; ++l2)
                for (int h2 = l2; h2 <= n; ++h2) {
                  bool all = true;
                  for (int a = l1; a <= h1; ++a)
                    for (int b = l2; b <= h2; ++b) all = all && leaders_cross(g, type, i, a, j, b);
                  bool f = pa.forced(i, {l1, h1}, j, {l2, h2});
                  if (pa.info(i, j).kind != PairKind::kGeneral || (h1 - l1 + 1) * (h2 - l2 + 1) <= 16) {
                    ASSERT_EQ(f, all) << seed;
                  } else {
                    ASSERT_TRUE(!f || all);
                  }
                }
        }
    }
  }
}

TEST(PairAnalysis, ThresholdPairsAreUndecidedPairs) {
  // fine grid: general position is likely but not guaranteed, so only check inclusion
  for (int seed = 0; seed < 100; ++seed) {
    Geophylogeny g = testing_support::random_grid_instance(800 + seed, 6 + seed % 6, 1000, seed % 2);
    for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
      PairAnalysis pa(g, type);
      PairClasses pc(g, type);
      for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) {
          if (i == j) continue;
          const PairInfo& f = pa.info(i, j);
          if (f.kind == PairKind::kThreshold) {
            EXPECT_TRUE(pc.undecided(f.p, f.q));
          }
          if (f.kind == PairKind::kOrder && f.cross_small_left != f.cross_small_right) {
            // the view order puts first the leaf that avoids the crossing when left
            LeafId lo = std::min(i, j), hi = std::max(i, j);
            EXPECT_EQ(view_before(g, type, lo, hi), !f.cross_small_left);
          }
        }
    }
  }
}

TEST(PairAnalysis, XStarForSpecExample) {
  // p=(2,1), q=(2,2) with B from (1,4) to (3,4): the ray is vertical, x* = 2
  auto g = testing_support::make_instance("((l1,l2),l3);", {{2, 1}, {2, 2}, {0.5, 2}},
                                          Layout::identity(3, Decimal::from_int(4)), 4, 4);
  PairAnalysis pa(g, LeaderType::kS);
  const PairInfo& f = pa.info(0, 1);
  ASSERT_EQ(f.kind, PairKind::kThreshold);
  EXPECT_EQ(f.p, 0);
  EXPECT_EQ(f.lt, 1);
  EXPECT_TRUE(f.tie);
}
