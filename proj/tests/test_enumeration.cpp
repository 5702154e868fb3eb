#include <gtest/gtest.h>

#include <algorithm>

#include "chipfire/enumeration.hpp"
#include "oracles.hpp"

using namespace chipfire;

namespace {

std::vector<ChipConfig> wrap(std::vector<std::vector<int>> raw) {
  std::vector<ChipConfig> out;
  for (auto& v : raw) out.emplace_back(std::move(v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Enumerate, TinyCases) {
  EXPECT_EQ(enumerate_src(path_tree(2), 1), (std::vector<ChipConfig>{{0, 1}, {1, 0}}));
  EXPECT_TRUE(enumerate_src(path_tree(3), 1).empty());
  EXPECT_EQ(enumerate_src(path_tree(1), 0), (std::vector<ChipConfig>{ChipConfig{0}}));
  EXPECT_EQ(enumerate_src(path_tree(1), 4), (std::vector<ChipConfig>{ChipConfig{4}}));
  EXPECT_EQ(enumerate_src(path_tree(3), 2),
            (std::vector<ChipConfig>{{0, 1, 1}, {0, 2, 0}, {1, 0, 1}, {1, 1, 0}}));
}

TEST(Enumerate, TwoDilatedPoints) {
  EXPECT_EQ(enumerate_dilate_lattice_points(path_tree(2), 1, 2),
            (std::vector<ChipConfig>{{0, 2}, {1, 1}, {2, 0}}));
  EXPECT_THROW(enumerate_dilate_lattice_points(path_tree(3), 1, 2), PreconditionError);
}

TEST(Enumerate, MatchesBruteForce) {
  for (int n = 1; n <= 5; ++n) {
    for_each_labeled_tree(n, [&](const Tree& t) {
      for (int l = 0; l <= n + 3; ++l) {
        ASSERT_EQ(enumerate_src(t, l), wrap(oracle::src_bruteforce(t, l)));
      }
      for (int level = 2; level <= 3; ++level) {
        for (int l = n - 1; l <= n + 1; ++l) {
          ASSERT_EQ(enumerate_dilate_lattice_points(t, l, level),
                    wrap(oracle::src_bruteforce(t, level * l, level)));
        }
      }
    });
  }
}

TEST(Enumerate, GuardTrips) {
  EXPECT_THROW(enumerate_src(path_tree(8), 40, 1000), CapExceeded);
}

TEST(Enumerate, CountWithoutMaterializing) {
  Tree t = star_tree(5);
  EXPECT_EQ(count_src(t, leaf_elim_order(t), 6), enumerate_src(t, 6).size());
}

TEST(Compositions, CountsAndSaturation) {
  EXPECT_EQ(composition_count(3, 3, 100), 10u);
  EXPECT_EQ(composition_count(0, 4, 100), 1u);
  EXPECT_EQ(composition_count(5, 0, 100), 0u);
  EXPECT_EQ(composition_count(100, 50, 1000), 1001u);
}

TEST(Recurrence, KnownValues) {
  auto table = count_recurrence(12, 10);
  EXPECT_EQ(table(0, 1), 1);
  EXPECT_EQ(table(5, 1), 1);
  EXPECT_EQ(table(1, 2), 2);
  EXPECT_EQ(table(0, 2), 0);
  EXPECT_EQ(table(2, 3), 4);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(table(n - 1, n), BigInt(1) << (n - 1));
  EXPECT_EQ(table(9, 10), 512);
  EXPECT_THROW(table(13, 1), PreconditionError);
}

TEST(Recurrence, CsvContainsFrozenRow) {
  std::string csv = count_recurrence(12, 10).to_csv();
  EXPECT_EQ(csv.rfind("l,n,count\n", 0), 0u);
  EXPECT_NE(csv.find("\n9,10,512\n"), std::string::npos);
}

TEST(Recurrence, MatchesBruteForceCounts) {
  auto table = count_recurrence(9, 6);
  for (int n = 1; n <= 6; ++n) {
    // One tree per size is enough here; the exhaustive sweep lives in the
    // acceptance run.
    Tree t = n % 2 ? path_tree(n) : star_tree(n);
    for (int l = 0; l <= std::min(9, n + 3); ++l) {
      EXPECT_EQ(BigInt(oracle::src_bruteforce(t, l).size()), table(l, n)) << "l=" << l << " n=" << n;
    }
  }
}

TEST(Recurrence, IsShapeIndependent) {
  auto table = count_recurrence(8, 5);
  for_each_labeled_tree(5, [&](const Tree& t) {
    for (int l = 0; l <= 8; ++l) ASSERT_EQ(BigInt(enumerate_src(t, l).size()), table(l, 5));
  });
}

TEST(Properties, AddingAChipKeepsSelfReachable) {
  for (int n = 1; n <= 5; ++n) {
    for_each_labeled_tree(n, [&](const Tree& t) {
      for (int l = 0; l <= n + 2; ++l) {
        auto next = enumerate_src(t, l + 1);
        for (const auto& c : enumerate_src(t, l)) {
          for (Vertex v = 0; v < n; ++v) {
            ASSERT_TRUE(std::binary_search(next.begin(), next.end(), c.plus(v, 1)));
          }
        }
      }
    });
  }
}

TEST(Properties, MinimalConfigurationsRespectDegree) {
  for (int n = 1; n <= 6; ++n) {
    for_each_labeled_tree(n, [&](const Tree& t) {
      auto minimal = enumerate_src(t, n - 1);
      ASSERT_EQ(minimal.size(), std::size_t{1} << (n - 1));
      for (const auto& s : minimal) {
        for (Vertex v = 0; v < n; ++v) ASSERT_LE(s[v], t.degree(v));
      }
    });
  }
}
