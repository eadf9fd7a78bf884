#include <gtest/gtest.h>

#include <algorithm>

#include "geophylo/fpt.hpp"
#include "support.hpp"

using namespace geophylo;
using testing_support::make_instance;

namespace {

// p2 in the s-areas of p1 (left, low) and p3 (right, low).
Geophylogeny dependent_triple() {
  return make_instance("((l1,l2),l3);", {{1, 1}, {2, 8}, {3, 1}}, Layout::identity(3, Decimal::from_int(10)), 4, 10);
}

std::size_t pair_index(const PairClasses& pc, LeafId p, LeafId q) {
  const auto& u = pc.undecided_pairs();
  return static_cast<std::size_t>(std::find(u.begin(), u.end(), std::pair{p, q}) - u.begin());
}

// Distinct x and distinct y over all sites and anchors.
bool general_position(const Geophylogeny& g) {
  for (LeafId a = 0; a < g.n(); ++a)
    for (LeafId b = a + 1; b < g.n(); ++b)
      if (g.site(a).x == g.site(b).x || g.site(a).y == g.site(b).y) return false;
  for (LeafId a = 0; a < g.n(); ++a)
    for (int p = 1; p <= g.n(); ++p)
      if (g.site(a).x == g.X(p)) return false;
  return true;
}

}  // namespace

TEST(Fpt, T3) {
  Geophylogeny g = testing_support::t3();
  FptResult r = solve_fpt(g, LeaderType::kS);
  EXPECT_EQ(r.k, classify_pairs(g, LeaderType::kS).k());
  EXPECT_EQ(r.crossings, 1);
  EXPECT_EQ(r.crossings, count_crossings(g, r.order, LeaderType::kS));
}

TEST(Fpt, GeometryFreeMatchesTanglegramSolver) {
  for (int seed = 0; seed < 20; ++seed)
    for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
      Geophylogeny g = testing_support::geometry_free_instance(100 + seed, 3 + seed % 8, type);
      FptResult f = solve_fpt(g, type);
      GeometryFreeResult gf = solve_geometry_free(g, type);
      EXPECT_EQ(f.k, 0);
      EXPECT_EQ(f.crossings, gf.crossings);
      EXPECT_EQ(f.order, gf.order);
    }
}

TEST(Fpt, ConflictingTripleIsCreditedOnce) {
  Geophylogeny g = dependent_triple();
  const PhyloTree& t = g.tree();
  const LeafId p1 = *t.find_leaf("l1"), p2 = *t.find_leaf("l2"), p3 = *t.find_leaf("l3");
  PairClasses pc = classify_pairs(g, LeaderType::kS);
  ASSERT_EQ(pc.k(), 2);
  ASSERT_TRUE(pc.undecided(p1, p2));
  ASSERT_TRUE(pc.undecided(p3, p2));
  // p2 left of s1 and right of s3
  DecisionWord w(2, 0);
  w[pair_index(pc, p1, p2)] = 1;
  w[pair_index(pc, p3, p2)] = 0;
  Tournament k = build_tournament(g, LeaderType::kS, pc, w);
  EXPECT_EQ(k.conflicting_triples, 1);
  ASSERT_EQ(k.reoriented.size(), 1u);
  EXPECT_EQ(k.reoriented[0], (std::pair{std::min(p1, p3), std::max(p1, p3)}));
  EXPECT_TRUE(k.acyclic);
  EXPECT_EQ(k.order, (std::vector<LeafId>{p3, p2, p1}));

  // the restricted drawing forces s1 and s3 to cross
  std::vector<Block> iv = word_intervals(g, LeaderType::kS, pc, w);
  EXPECT_EQ(iv[p1].lo, 3);
  EXPECT_EQ(iv[p3].hi, 1);
  Tanglegram tg(t, k.order);
  tg.allowed = iv;
  tg.credit = 1;
  TanglegramResult r = solve_tanglegram(tg);
  EXPECT_EQ(r.crossings, count_crossings(g, r.order, LeaderType::kS));

  // the other words need no reorientation
  for (int bits = 0; bits < 4; ++bits) {
    DecisionWord o = {static_cast<std::uint8_t>(bits & 1), static_cast<std::uint8_t>(bits >> 1)};
    if (o == w) continue;
    EXPECT_EQ(build_tournament(g, LeaderType::kS, pc, o).conflicting_triples, 0);
  }
}

TEST(Fpt, IntervalsIndependentOfDecisionOrder) {
  std::mt19937_64 rng(11);
  for (int seed = 0; seed < 60; ++seed) {
    Geophylogeny g = testing_support::random_grid_instance(700 + seed, 3 + seed % 8, 30, seed % 2);
    for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
      PairClasses pc = classify_pairs(g, type);
      DecisionWord w(pc.k());
      for (auto& b : w) b = rng() % 2;
      std::vector<int> order(pc.k());
      std::iota(order.begin(), order.end(), 0);
      std::vector<Block> base = word_intervals(g, type, pc, w);
      for (int rep = 0; rep < 5; ++rep) {
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<Block> other = word_intervals(g, type, pc, w, &order);
        for (int l = 0; l < g.n(); ++l) {
          EXPECT_EQ(base[l].lo, other[l].lo);
          EXPECT_EQ(base[l].hi, other[l].hi);
        }
      }
      // left decisions only lower b, right decisions only raise a
      std::vector<Block> iv(g.n(), Block{1, g.n()});
      for (int k = 0; k < pc.k(); ++k) {
        auto [p, q] = pc.undecided_pairs()[k];
        auto d = decision_bound(g, type, p, q);
        if (!d) continue;
        Block before = iv[p];
        apply_decision(iv[p], *d, w[k] != 0);
        if (w[k]) {
          EXPECT_EQ(iv[p].hi, before.hi);
          EXPECT_GE(iv[p].lo, before.lo);
        } else {
          EXPECT_EQ(iv[p].lo, before.lo);
          EXPECT_LE(iv[p].hi, before.hi);
        }
      }
    }
  }
}

TEST(Fpt, RefusesLargeK) {
  Geophylogeny g = testing_support::random_grid_instance(5, 10, 10, true);
  const int k = classify_pairs(g, LeaderType::kPO).k();
  ASSERT_GT(k, 1);
  FptOptions o;
  o.k_cap = k - 1;
  try {
    solve_fpt(g, LeaderType::kPO, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapExceeded);
    EXPECT_NE(std::string(e.what()).find("k = " + std::to_string(k)), std::string::npos);
  }
}

TEST(Fpt, EqualsBruteForce) {
  for (int seed = 0; seed < 240; ++seed) {
    const int n = 2 + seed % 10;
    const int grid = seed % 3 == 0 ? 6 : 1000;
    Geophylogeny g = testing_support::random_grid_instance(9000 + seed, n, grid, seed % 2 == 0);
    for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
      FptOptions o;
      o.k_cap = n * n;
      FptResult r = solve_fpt(g, type, o);
      ASSERT_EQ(r.crossings, brute_force_min(g, type).crossings) << "seed " << seed << " " << to_string(type);
      EXPECT_EQ(r.crossings, count_crossings(g, r.order, type));
    }
  }
}

TEST(Fpt, TournamentsAcyclicInGeneralPosition) {
  // every word of small instances: the oriented graph is acyclic after the
  // reorientations, and on feasible words the tanglegram optimum plus credit
  // is the crossing count of the drawing it produces
  std::int64_t words = 0, feasible = 0, triples = 0;
  for (int seed = 0; seed < 400 && words < 20000; ++seed) {
    Geophylogeny g = testing_support::random_grid_instance(4000 + seed, 3 + seed % 6, 1000, false);
    if (!general_position(g)) continue;
    for (LeaderType type : {LeaderType::kS, LeaderType::kPO}) {
      PairClasses pc = classify_pairs(g, type);
      if (pc.k() == 0 || pc.k() > 10) continue;
      for (std::uint32_t bits = 0; bits < (1u << pc.k()); ++bits) {
        DecisionWord w(pc.k());
        for (int k = 0; k < pc.k(); ++k) w[k] = (bits >> k) & 1;
        ++words;
        Tournament t = build_tournament(g, type, pc, w);
        triples += t.conflicting_triples;
        std::vector<Block> iv = word_intervals(g, type, pc, w);
        if (std::any_of(iv.begin(), iv.end(), [](const Block& b) { return b.lo > b.hi; })) continue;
        ASSERT_TRUE(t.acyclic) << "seed " << seed << " " << to_string(type) << " word " << bits;
        Tanglegram tg(g.tree(), t.order);
        tg.allowed = iv;
        tg.credit = static_cast<std::int64_t>(t.reoriented.size());
        TanglegramResult r;
        try {
          r = solve_tanglegram(tg);
        } catch (const Error&) {
          continue;
        }
        ++feasible;
        EXPECT_EQ(r.crossings, count_crossings(g, r.order, type))
            << "seed " << seed << " " << to_string(type) << " word " << bits;
      }
    }
  }
  EXPECT_GT(words, 1000);
  EXPECT_GT(feasible, 100);
  EXPECT_GT(triples, 0);
}

TEST(Fpt, ProgressIsReported) {
  Geophylogeny g = testing_support::random_grid_instance(3, 9, 1000, true);
  FptOptions o;
  o.k_cap = 100;
  int calls = 0;
  FptProgress last;
  o.progress = [&](const FptProgress& p) {
    ++calls;
    last = p;
  };
  FptResult r = solve_fpt(g, LeaderType::kS, o);
  EXPECT_GE(calls, 1);
  EXPECT_EQ(last.words, r.stats.words);
}
