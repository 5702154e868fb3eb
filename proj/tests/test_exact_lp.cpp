#include <gtest/gtest.h>

#include <random>

#include "chipfire/exact_lp.hpp"
#include "chipfire/enumeration.hpp"

using namespace chipfire;

TEST(Hull, SquareMembership) {
  std::vector<ChipConfig> square{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
  auto mid = in_convex_hull(square, ChipConfig{1, 1});
  EXPECT_TRUE(mid.inside);
  ASSERT_TRUE(mid.witness);
  EXPECT_EQ(mid.witness->validate(), "");
  EXPECT_FALSE(in_convex_hull(square, ChipConfig{3, 0}).inside);
  EXPECT_TRUE(in_convex_hull(square, ChipConfig{2, 1}).inside);
}

TEST(Hull, SegmentWithRationalWeights) {
  std::vector<ChipConfig> seg{{0, 3}, {3, 0}};
  auto r = in_convex_hull(seg, ChipConfig{1, 2});
  ASSERT_TRUE(r.inside);
  ASSERT_EQ(r.witness->terms.size(), 2u);
  EXPECT_EQ(r.witness->terms[0].config, (ChipConfig{0, 3}));
  EXPECT_EQ(r.witness->terms[0].weight, Rational(2, 3));
  EXPECT_EQ(r.witness->terms[1].weight, Rational(1, 3));
  EXPECT_FALSE(in_convex_hull(seg, ChipConfig{1, 1}).inside);
}

TEST(Hull, DimensionMismatchRejected) {
  std::vector<ChipConfig> pts{{0, 1}};
  EXPECT_THROW(in_convex_hull(pts, ChipConfig{0, 1, 2}), PreconditionError);
  EXPECT_THROW(in_convex_hull({}, ChipConfig{0}), PreconditionError);
}

TEST(Hull, VertexTests) {
  std::vector<ChipConfig> pts{{0, 0}, {2, 0}, {0, 2}, {1, 1}, {1, 0}};
  EXPECT_TRUE(is_hull_vertex(pts, ChipConfig{2, 0}));
  EXPECT_FALSE(is_hull_vertex(pts, ChipConfig{1, 1}));
  EXPECT_FALSE(is_hull_vertex(pts, ChipConfig{1, 0}));
  EXPECT_THROW(is_hull_vertex(pts, ChipConfig{5, 5}), PreconditionError);
  EXPECT_EQ(hull_vertices(pts), (std::vector<ChipConfig>{{0, 0}, {0, 2}, {2, 0}}));
  std::vector<ChipConfig> one{{3, 4}};
  EXPECT_TRUE(is_hull_vertex(one, ChipConfig{3, 4}));
}

TEST(Hull, PrunedVertexSetMatchesPerPointTest) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 40; ++k) {
    std::vector<ChipConfig> pts;
    int d = 2 + static_cast<int>(rng() % 3);
    int m = 3 + static_cast<int>(rng() % 10);
    for (int i = 0; i < m; ++i) {
      std::vector<int> p(d);
      for (int& x : p) x = static_cast<int>(rng() % 4);
      pts.emplace_back(p);
    }
    std::vector<ChipConfig> direct;
    auto sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const auto& p : sorted) {
      if (is_hull_vertex(sorted, p)) direct.push_back(p);
    }
    EXPECT_EQ(hull_vertices(pts), direct);
  }
}

TEST(Hull, WitnessesReconstructOnPolytopeInstances) {
  Tree t = star_tree(4);
  auto pts = enumerate_src(t, 5);
  for (const auto& p : pts) {
    auto r = in_convex_hull(pts, p);
    ASSERT_TRUE(r.inside);
    ASSERT_EQ(r.witness->validate(), "");
    EXPECT_LT(r.pivots, kSimplexPivotLimit);
  }
}

TEST(Hull, DegenerateInstancesTerminate) {
  // Many coincident and collinear points stress Bland's rule.
  std::vector<ChipConfig> pts;
  for (int i = 0; i <= 6; ++i) pts.push_back(ChipConfig{i, 6 - i, 0});
  for (int i = 0; i <= 6; ++i) pts.push_back(ChipConfig{i, 6 - i, 0});
  auto r = in_convex_hull(pts, ChipConfig{3, 3, 0});
  EXPECT_TRUE(r.inside);
  EXPECT_FALSE(in_convex_hull(pts, ChipConfig{3, 2, 1}).inside);
  EXPECT_EQ(hull_vertices(pts), (std::vector<ChipConfig>{{0, 6, 0}, {6, 0, 0}}));
}

TEST(Hull, LargeCoordinatesFallBackToBigIntegers) {
  const int big = 1 << 30;
  std::vector<ChipConfig> pts{{big, 0, 0}, {0, big, 0}, {0, 0, big}, {big - 1, 1, 0}};
  auto r = in_convex_hull(pts, ChipConfig{big / 2, big / 4, big / 4});
  EXPECT_TRUE(r.inside);
  EXPECT_EQ(r.witness->validate(), "");
}
