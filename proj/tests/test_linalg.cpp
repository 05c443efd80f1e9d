#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "colline/linalg.hpp"
#include "support.hpp"

using namespace colline;
using testing_support::random_vector;

TEST(LinearlyIndependent, Examples) {
  EXPECT_TRUE(linearly_independent(Vector({1, 0}), Vector({0, 1})));
  EXPECT_FALSE(linearly_independent(Vector({2, 4}), Vector({1, 2})));
  EXPECT_TRUE(linearly_independent(Vector({1, 2, 3}), Vector({2, 4, 7})));
  EXPECT_THROW(linearly_independent(Vector({1, 2}), Vector({1, 2, 3})), DimensionError);
}

TEST(AffineRank, Examples) {
  std::vector<Vector> one{Vector({5, 5})};
  std::vector<Vector> line{Vector({0, 0}), Vector({1, 0}), Vector({2, 0})};
  std::vector<Vector> square{Vector({0, 0}), Vector({1, 0}), Vector({0, 1}), Vector({1, 1})};
  EXPECT_EQ(affine_rank(one), 0u);
  EXPECT_EQ(affine_rank(line), 1u);
  EXPECT_EQ(affine_rank(square), 2u);
  EXPECT_THROW(affine_rank(std::vector<Vector>{}), Error);
}

TEST(CollinearityScalar, Examples) {
  EXPECT_EQ(collinearity_scalar(Vector({6, 9}), Vector({2, 3})), Scalar(3));
  EXPECT_EQ(collinearity_scalar(Vector({0, 0}), Vector({2, 3})), Scalar(0));
  EXPECT_FALSE(collinearity_scalar(Vector({1, 1}), Vector({2, 3})).has_value());
  EXPECT_THROW(collinearity_scalar(Vector({1, 1}), Vector({0, 0})), PreconditionError);
}

TEST(Rank, AgreesWithMinorOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t rows = 1 + trial % 4, cols = 1 + (trial / 4) % 4;
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < rows; ++i) {
      // Small range makes dependent rows common.
      vs.push_back(random_vector(rng, cols, trial % 3 == 0 ? 1 : 12));
    }
    if (trial % 5 == 0 && rows > 1) vs.back() = vs[0] * Scalar(3) - vs[1];
    EXPECT_EQ(rank(vs), oracle::rank_by_minors(testing_support::to_grid(vs)));
  }
}

TEST(AffineRank, PermutationAndTranslationInvariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t dim = 1 + trial % 4;
    std::vector<Vector> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(random_vector(rng, dim, trial % 2 ? 1 : 6));
    std::size_t base = affine_rank(pts);
    Vector t = random_vector(rng, dim);
    std::vector<Vector> moved;
    for (const auto& p : pts) moved.push_back(p + t);
    EXPECT_EQ(affine_rank(moved), base);
    std::shuffle(pts.begin(), pts.end(), rng);
    EXPECT_EQ(affine_rank(pts), base);
  }
}

TEST(CollinearityScalar, InvertsScaling) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Vector w = random_vector(rng, 1 + trial % 4);
    if (w.is_zero()) continue;
    Scalar s = testing_support::random_scalar(rng);
    EXPECT_EQ(collinearity_scalar(s * w, w), s);
  }
}

TEST(LinearlyIndependent, MatchesAffineRankFromOrigin) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t dim = 1 + trial % 4;
    Vector v = random_vector(rng, dim, 2), w = random_vector(rng, dim, 2);
    if (trial % 4 == 0) w = v * Scalar(2, 3);
    std::vector<Vector> pts{Vector::zero(dim), v, w};
    EXPECT_EQ(linearly_independent(v, w), affine_rank(pts) == 2);
  }
}

TEST(SolveAndKernel, Consistent) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix a = testing_support::random_matrix(rng, 2 + trial % 2, 3 + trial % 2, trial % 3 ? 12 : 1);
    for (const auto& k : kernel_basis(a)) {
      EXPECT_FALSE(k.is_zero());
      EXPECT_TRUE((a * k).is_zero());
    }
    EXPECT_EQ(kernel_basis(a).size() + rank(a), a.cols());
  }
  std::vector<Vector> cols{Vector({1, 0}), Vector({1, 1})};
  auto sol = solve_unique(cols, Vector({3, 2}));
  ASSERT_TRUE(sol);
  EXPECT_EQ((*sol)[0], Scalar(1));
  EXPECT_EQ((*sol)[1], Scalar(2));
}
