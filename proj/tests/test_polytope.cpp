#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "chipfire/enumeration.hpp"
#include "chipfire/exact_lp.hpp"
#include "chipfire/polytope.hpp"
#include "oracles.hpp"

using namespace chipfire;

TEST(NearMinimal, PathExamples) {
  Tree p3 = path_tree(3);
  auto a = near_minimal_about(p3, ChipConfig{5, 0, 1});
  ASSERT_TRUE(a);
  EXPECT_EQ(a->about, 0);
  EXPECT_EQ(a->chips_on_about, 5);
  auto b = near_minimal_about(p3, ChipConfig{0, 6, 0});
  ASSERT_TRUE(b);
  EXPECT_EQ(b->about, 1);
  EXPECT_EQ(b->chips_on_about, 6);
  EXPECT_FALSE(near_minimal_about(p3, ChipConfig{1, 2, 3}));
}

TEST(NearMinimal, Preconditions) {
  Tree p3 = path_tree(3);
  EXPECT_THROW(near_minimal_about(p3, ChipConfig{1, 0, 1}), PreconditionError);
  EXPECT_THROW(near_minimal_about(p3, ChipConfig{4, 0, 0}), PreconditionError);
}

TEST(NearMinimal, CharacterizationsAgreeWithRemovalDefinition) {
  for (int n = 1; n <= 5; ++n) {
    for_each_labeled_tree(n, [&](const Tree& t) {
      for (int l = n; l <= n + 2; ++l) {
        for (auto& raw : oracle::src_bruteforce(t, l)) {
          ChipConfig c(raw);
          int removable = 0;
          Vertex last = -1;
          for (Vertex v = 0; v < n; ++v) {
            if (raw[v] == 0) continue;
            auto less = raw;
            --less[v];
            if (oracle::dilated(t, less, 1)) {
              ++removable;
              last = v;
            }
          }
          auto cert = near_minimal_about(t, c);
          ASSERT_EQ(cert.has_value(), removable == 1);
          if (cert) {
            ASSERT_EQ(cert->about, last);
            ASSERT_EQ(cert->chips_on_about, l + t.degree(last) + 1 - n);
          }
        }
      }
    });
  }
}

TEST(Vertices, TinyCases) {
  EXPECT_EQ(enumerate_vertices(path_tree(2), 1), (std::vector<ChipConfig>{{0, 1}, {1, 0}}));
  EXPECT_EQ(enumerate_vertices(path_tree(1), 3), (std::vector<ChipConfig>{ChipConfig{3}}));
  EXPECT_THROW(enumerate_vertices(path_tree(3), 1), PreconditionError);
  auto p3 = enumerate_vertices(path_tree(3), 6);
  EXPECT_EQ(p3, (std::vector<ChipConfig>{{0, 1, 5}, {0, 6, 0}, {1, 0, 5}, {5, 0, 1}, {5, 1, 0}}));
}

TEST(Vertices, MatchLpOnSmallTrees) {
  for (int n = 1; n <= 4; ++n) {
    for_each_labeled_tree(n, [&](const Tree& t) {
      for (int l = n - 1; l <= n + 3; ++l) {
        auto pts = enumerate_src(t, l);
        std::vector<ChipConfig> direct;
        for (const auto& p : pts) {
          if (is_hull_vertex(pts, p)) direct.push_back(p);
        }
        ASSERT_EQ(enumerate_vertices(t, l), direct) << "n=" << n << " l=" << l;
      }
    });
  }
}

TEST(Decompose, GoldenPathExample) {
  Tree p3 = path_tree(3);
  auto combo = decompose_into_vertices(p3, leaf_elim_order_from(p3, {0, 1, 2}), ChipConfig{1, 2, 3});
  ConvexCombination want;
  want.point = ChipConfig{1, 2, 3};
  want.terms = {{Rational(1, 6), ChipConfig{5, 0, 1}},
                {Rational(1, 6), ChipConfig{1, 0, 5}},
                {Rational(4, 15), ChipConfig{0, 6, 0}},
                {Rational(2, 5), ChipConfig{0, 1, 5}}};
  want.canonicalize();
  EXPECT_EQ(combo.terms, want.terms);
  EXPECT_EQ(combo.validate(), "");
}

TEST(Decompose, VertexIsItsOwnDecomposition) {
  Tree p3 = path_tree(3);
  auto combo = decompose_into_vertices(p3, ChipConfig{0, 6, 0});
  ASSERT_EQ(combo.terms.size(), 1u);
  EXPECT_EQ(combo.terms[0].weight, Rational(1));
}

TEST(Decompose, EveryTermIsAVertexOnAllSmallTrees) {
  for (int n = 1; n <= 5; ++n) {
    for_each_labeled_tree(n, [&](const Tree& t) {
      for (int l = n; l <= n + 2; ++l) {
        auto vertices = enumerate_vertices(t, l);
        for (const auto& c : enumerate_src(t, l)) {
          auto combo = decompose_into_vertices(t, c);
          ASSERT_EQ(combo.validate(), "");
          for (const auto& term : combo.terms) {
            ASSERT_GT(term.weight, 0);
            ASSERT_TRUE(std::binary_search(vertices.begin(), vertices.end(), term.config));
          }
        }
      }
    });
  }
}

TEST(Decompose, AlternativeOrdersStillValid) {
  Tree p3 = path_tree(3);
  auto combo = decompose_into_vertices(p3, leaf_elim_order_from(p3, {1, 2, 0}), ChipConfig{1, 2, 3});
  EXPECT_EQ(combo.validate(), "");
  auto vertices = enumerate_vertices(p3, 6);
  for (const auto& term : combo.terms) {
    EXPECT_TRUE(std::binary_search(vertices.begin(), vertices.end(), term.config));
  }
}

TEST(Decompose, Preconditions) {
  Tree p3 = path_tree(3);
  EXPECT_THROW(decompose_into_vertices(p3, ChipConfig{1, 0, 1}), PreconditionError);
  EXPECT_THROW(decompose_into_vertices(p3, ChipConfig{4, 0, 0}), PreconditionError);
}

TEST(Idp, PathOnTwo) {
  auto d = idp_decompose(path_tree(2), ChipConfig{1, 1}, 1, 2);
  ASSERT_EQ(d.parts.size(), 2u);
  std::set<ChipConfig> parts(d.parts.begin(), d.parts.end());
  EXPECT_EQ(parts, (std::set<ChipConfig>{ChipConfig{1, 0}, ChipConfig{0, 1}}));
}

TEST(Idp, Preconditions) {
  Tree p3 = path_tree(3);
  EXPECT_THROW(idp_decompose(p3, ChipConfig{2, 2, 1}, 3, 2), PreconditionError);  // 5 != 6
  EXPECT_THROW(idp_decompose(p3, ChipConfig{6, 0, 0}, 3, 2), PreconditionError);  // not dilated
}

TEST(Idp, AllLatticePointsOnSmallTrees) {
  for (int n = 1; n <= 4; ++n) {
    for_each_labeled_tree(n, [&](const Tree& t) {
      for (int level = 2; level <= 3; ++level) {
        for (int l = n - 1; l <= n + 2; ++l) {
          for (const auto& w : enumerate_dilate_lattice_points(t, l, level)) {
            auto d = idp_decompose(t, w, l, level);
            ChipConfig sum = ChipConfig::zeros(n);
            ASSERT_EQ(static_cast<int>(d.parts.size()), level);
            for (const auto& p : d.parts) {
              ASSERT_EQ(p.total(), l);
              ASSERT_TRUE(oracle::dilated(t, p.vec(), 1));
              sum = sum + p;
            }
            ASSERT_EQ(sum, w);
          }
        }
      }
    });
  }
}

TEST(CubeMap, StarIsFrozen) {
  auto m = cube_map(star_tree(4));
  std::vector<std::vector<long long>> U{{0, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}, {-1, -1, -1, -1}};
  EXPECT_EQ(m.U, U);
  EXPECT_EQ(m.b, (std::vector<long long>{0, 0, 0, 3}));
  EXPECT_EQ(m.determinant(), 1);
}

TEST(CubeMap, SingleVertexAndEdge) {
  auto one = cube_map(path_tree(1));
  EXPECT_EQ(one.U, (std::vector<std::vector<long long>>{{1}}));
  EXPECT_EQ(one.b, (std::vector<long long>{0}));
  auto two = cube_map(path_tree(2));
  EXPECT_EQ(two.determinant(), 1);
  std::set<std::vector<long long>> image;
  for (const auto& s : enumerate_src(path_tree(2), 1)) image.insert(two.apply(s.chips()));
  EXPECT_EQ(image, (std::set<std::vector<long long>>{{0, 0}, {1, 0}}));
}

TEST(CubeMap, ImageIsTheCubeOnAllTreesUpToSix) {
  for (int n = 1; n <= 6; ++n) {
    for_each_labeled_tree(n, [&](const Tree& t) {
      auto m = cube_map(t);
      ASSERT_EQ(m.determinant(), 1);
      std::set<std::vector<long long>> image;
      for (const auto& s : enumerate_src(t, n - 1)) {
        auto y = m.apply(s.chips());
        ASSERT_EQ(y[n - 1], 0);
        for (int i = 0; i + 1 < n; ++i) ASSERT_TRUE(y[i] == 0 || y[i] == 1);
        image.insert(y);
      }
      ASSERT_EQ(image.size(), std::size_t{1} << (n - 1));
    });
  }
}

TEST(Determinant, GeneralMatrices) {
  AffineUnimodularMap m;
  m.U = {{2, 1}, {1, 1}};
  m.b = {0, 0};
  EXPECT_EQ(m.determinant(), 1);
  m.U = {{0, 1}, {1, 0}};
  EXPECT_EQ(m.determinant(), -1);
  m.U = {{1, 2}, {2, 4}};
  EXPECT_EQ(m.determinant(), 0);
  const long long big = 1LL << 40;
  m.U = {{big, 1}, {1, big}};
  EXPECT_EQ(m.determinant(), BigInt(big) * big - 1);
}
