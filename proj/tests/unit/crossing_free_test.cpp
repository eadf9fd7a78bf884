#include <gtest/gtest.h>

#include "geophylo/crossing_free.hpp"
#include "support.hpp"

using namespace geophylo;
using testing_support::make_instance;

TEST(CrossingFree, SitesBelowRealizableOrder) {
  Geophylogeny g = make_instance("((l1,l2),(l3,l4));", {{3, 1}, {4, 2}, {1, 3}, {2, 1}},
                                 Layout::identity(4, Decimal::from_int(5)), 5, 5);
  for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
    auto w = decide_crossing_free(g, type);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(count_crossings(g, *w, type), 0);
  }
}

TEST(CrossingFree, T3HasNone) {
  EXPECT_FALSE(decide_crossing_free(testing_support::t3(), LeaderType::kS).has_value());
}

TEST(CrossingFree, PoFreeWhereSCrosses) {
  // sites right of the leaf span: the po-leaders stay apart, the s-leaders cannot
  Geophylogeny g = make_instance("((l1,l2),l3);", {{2, 4}, {6, 2}, {4, 3}}, Layout::identity(3, Decimal::from_int(6)), 6, 6);
  auto po = decide_crossing_free(g, LeaderType::kPO);
  ASSERT_TRUE(po.has_value());
  EXPECT_EQ(count_crossings(g, *po, LeaderType::kPO), 0);
  EXPECT_FALSE(decide_crossing_free(g, LeaderType::kS).has_value());
  EXPECT_GT(brute_force_min(g, LeaderType::kS).crossings, 0);
}

TEST(CrossingFree, WitnessIffOptimumZero) {
  int zero = 0;
  for (int seed = 0; seed < 300; ++seed) {
    const int n = 2 + seed % 11;
    Geophylogeny g = seed % 3 ? testing_support::planted_instance(seed, n)
                              : testing_support::random_grid_instance(50 + seed, n, 8, seed % 2);
    for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
      const std::int64_t opt = brute_force_min(g, type).crossings;
      auto w = decide_crossing_free(g, type);
      ASSERT_EQ(w.has_value(), opt == 0) << "seed " << seed << " " << to_string(type);
      if (w) {
        EXPECT_EQ(count_crossings(g, *w, type), 0);
        ++zero;
      }
    }
  }
  EXPECT_GT(zero, 100);
}
