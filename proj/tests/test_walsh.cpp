#include <gtest/gtest.h>

#include "pinchkit/walsh.hpp"
#include "test_support.hpp"

using namespace pinchkit;
using namespace pinchkit::testing;

TEST(WalshMatrix, LevelOne) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd expected(2, 2);
  expected << r, r, -r, r;
  EXPECT_LE((walsh_matrix(1) - expected).norm(), 1e-16);
}

TEST(WalshMatrix, LevelTwoExpandsTheRecursion) {
  Eigen::MatrixXd expected(4, 4);
  expected << 1, 1, 1, 1, -1, 1, -1, 1, -1, -1, 1, 1, 1, -1, -1, 1;
  EXPECT_LE((walsh_matrix(2) - 0.5 * expected).norm(), 1e-15);
}

TEST(WalshMatrix, OrthogonalWithFlatEntries) {
  for (int k = 1; k <= 8; ++k) {
    const auto v = walsh_matrix(k);
    EXPECT_LE((v * v.transpose() - Eigen::MatrixXd::Identity(v.rows(), v.cols())).norm(), 1e-12);
    EXPECT_LE((v.cwiseAbs().array() - std::pow(2.0, -0.5 * k)).abs().maxCoeff(), 1e-15);
  }
}

TEST(WalshMatrix, TooLarge) {
  try {
    walsh_matrix(17);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(EqualizeBlocks, ScalarMeans) {
  const auto two = equalize_blocks({mat({{1}}), mat({{3}})});
  EXPECT_NEAR(std::abs(two.conjugated(0, 0) - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(two.conjugated(1, 1) - 2.0), 0.0, 1e-14);
  const auto four = equalize_blocks({mat({{1}}), mat({{2}}), mat({{3}}), mat({{4}})});
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(four.conjugated(k, k) - 2.5), 0.0, 1e-14);
}

TEST(EqualizeBlocks, NilpotentPair) {
  const auto eq = equalize_blocks({mat({{0, 1}, {0, 0}}), mat({{0, 0}, {1, 0}})});
  const ComplexMatrix expected = 0.5 * mat({{0, 1}, {1, 0}});
  EXPECT_LE((eq.conjugated.topLeftCorner(2, 2) - expected).norm(), 1e-14);
  EXPECT_LE((eq.conjugated.bottomRightCorner(2, 2) - expected).norm(), 1e-14);
}

TEST(EqualizeBlocks, PreservesSingularValues) {
  Rng rng(21);
  std::vector<ComplexMatrix> blocks;
  for (int j = 0; j < 8; ++j) blocks.push_back(gaussian(rng, 3, 3));
  const auto eq = equalize_blocks(blocks);
  const ComplexMatrix d = block_diagonal(blocks);
  Eigen::BDCSVD<ComplexMatrix> a(d), b(eq.conjugated);
  EXPECT_LE((a.singularValues() - b.singularValues()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(EqualizeBlocks, Errors) {
  try {
    equalize_blocks({mat({{1}}), mat({{2}}), mat({{3}})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadBlockCount);
  }
  try {
    equalize_blocks({mat({{1}}), mat({{1, 0}, {0, 1}})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeMismatch);
  }
}

TEST(ChooseWalshLevel, Examples) {
  EXPECT_EQ(choose_walsh_level(0.5, 0.8).l, 3);
  EXPECT_EQ(choose_walsh_level(0.9, 0.95).l, 6);
  EXPECT_EQ(choose_walsh_level(0.0, 0.5).l, 2);
}

TEST(ChooseWalshLevel, MinimalAndConsistent) {
  for (double nx = 0.0; nx < 0.89; nx += 0.013) {
    const auto plan = choose_walsh_level(nx, 0.9);
    const double p = std::ldexp(1.0, plan.l);
    EXPECT_LT(p / (p - 2.0) * nx, 0.9);
    if (plan.l > 2) {
      const double q = p / 2.0;
      EXPECT_GE(q / (q - 2.0) * nx, 0.9);
    }
    EXPECT_EQ(plan.m + 2 * plan.n, static_cast<int>(p));
    EXPECT_EQ(plan.epsilon, std::pow(2.0, -0.5 * plan.l));
    EXPECT_DOUBLE_EQ(plan.alpha, p / (p - 2.0));
    EXPECT_DOUBLE_EQ(plan.beta, p);
  }
}

TEST(ChooseWalshLevel, RejectsNonStrict) {
  try {
    choose_walsh_level(0.9, 0.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotStrictContraction);
  }
}

TEST(WalshSplitting, DiagonalBlocksRecoverDPlusK) {
  Rng rng(22);
  const ComplexMatrix d = gaussian(rng, 3, 3, 0.1);
  const ComplexMatrix k = gaussian(rng, 3, 3, 0.05);
  const auto plan = choose_walsh_level(0.3, 0.9);
  const auto blocks = walsh_splitting_blocks(d, k, plan);
  ASSERT_EQ(blocks.size(), std::size_t{1} << plan.l);
  const auto eq = equalize_blocks(blocks);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto at = static_cast<Eigen::Index>(3 * j);
    EXPECT_LE((eq.conjugated.block(at, at, 3, 3) - (d + k)).norm(), 1e-12);
  }
}
