#include <gtest/gtest.h>

#include "pinchkit/essrange.hpp"
#include "test_support.hpp"

using namespace pinchkit;
using namespace pinchkit::testing;

TEST(BuildHost, Shift3) {
  EXPECT_EQ(build_host(HostSpec::shift(3)), mat({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
}

TEST(BuildHost, DiagonalAndDirectSum) {
  const ComplexMatrix d = build_host(HostSpec::diagonal({0.5, Complex(0, -0.5)}));
  EXPECT_EQ(d, mat({{0.5, 0}, {0, Complex(0, -0.5)}}));
  HostSpec sum;
  sum.kind = HostKind::DirectSum;
  sum.children = {HostSpec::shift(2), HostSpec::diagonal({1.0})};
  EXPECT_EQ(build_host(sum), mat({{0, 1, 0}, {0, 0, 0}, {0, 0, 1}}));
}

TEST(BuildHost, BilateralAndWeightedShifts) {
  HostSpec bi;
  bi.kind = HostKind::TruncatedBilateralShift;
  bi.dim = 3;
  EXPECT_EQ(build_host(bi), mat({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}));
  HostSpec w;
  w.kind = HostKind::WeightedShift;
  w.weights = {0.5, 2.0};
  EXPECT_EQ(build_host(w), mat({{0, 0.5, 0}, {0, 0, 2.0}, {0, 0, 0}}));
}

TEST(BuildHost, BadSpecs) {
  HostSpec s = HostSpec::shift(4, -1.0);
  EXPECT_THROW(build_host(s), Error);
  HostSpec file;
  file.kind = HostKind::MatrixFile;
  file.path = "/nonexistent/host.json";
  try {
    build_host(file);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
  }
}

TEST(EssentialRange, ShiftCompressionsAreShifts) {
  const auto est = essential_range_estimate(HostSpec::shift(200), 32, 24);
  EXPECT_EQ(est.removals.size(), 33u);
  for (double s : est.intersection_support) EXPECT_NEAR(s, std::cos(kPi / 169.0), 1e-10);
  EXPECT_NEAR(est.min_intersection_support(), 0.9998272238, 1e-9);
  for (const auto& h : est.hulls)
    for (std::size_t k = 0; k < h.samples.size(); ++k)
      EXPECT_LE(est.intersection_support[k], h.samples[k].support + 1e-12);
}

TEST(EssentialRange, OutlierEigenvalueIsRemoved) {
  std::vector<Complex> v(50, 0.0);
  v[0] = 1.0;
  const auto est = essential_range_estimate(HostSpec::diagonal(v), 3, 16);
  for (double s : est.intersection_support) EXPECT_NEAR(s, 0.0, 1e-14);
}

TEST(EssentialRange, ScaledShift) {
  const auto est = essential_range_estimate(HostSpec::shift(100, 0.5), 10, 16);
  EXPECT_NEAR(est.min_intersection_support(), 0.5 * std::cos(kPi / 91.0), 1e-10);
}

TEST(EssentialRange, NonDecreasingInDimension) {
  double prev = 0.0;
  for (int n : {40, 80, 160}) {
    const double s = essential_range_estimate(HostSpec::shift(n), 10, 16).min_intersection_support();
    EXPECT_GE(s, prev - 1e-10);
    prev = s;
  }
}

TEST(EssentialRange, RemovalBound) {
  EXPECT_THROW(essential_range_estimate(HostSpec::shift(10), 5, 16), Error);
}

TEST(LimitDiagonalBasis, FullSystemIsReturned) {
  const auto b = limit_diagonal_basis(ComplexMatrix::Zero(3, 3), Frame::identity(3), 0.0);
  EXPECT_EQ(b.basis.columns(), ComplexMatrix::Identity(3, 3));
}

TEST(LimitDiagonalBasis, AlternatingDiagonal) {
  const int n = 16;
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  std::vector<Eigen::Index> odd;
  for (int k = 0; k < n; k += 2) {
    a(k, k) = 1.0;
    odd.push_back(k);
  }
  const auto b = limit_diagonal_basis(a, Frame::coordinates(n, odd), 1.0);
  EXPECT_LE(b.basis.orthonormality_error(), 1e-10);
  ASSERT_GE(b.blocks.size(), 3u);
  const double expected[3] = {0.5, 2.0 / 3.0, 0.8};
  const ComplexMatrix c = compress(a, b.basis);
  for (int j = 0; j < 3; ++j) {
    const auto& blk = b.blocks[static_cast<std::size_t>(j)];
    EXPECT_NEAR(blk.mean.real(), expected[j], 1e-12);
    for (Eigen::Index k = blk.start; k < blk.start + blk.size; ++k)
      EXPECT_NEAR(std::abs(c(k, k) - blk.mean), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(c.block(blk.start, blk.start, blk.size, blk.size).trace() -
                         blk.mean * static_cast<double>(blk.size)),
                0.0, 1e-10);
  }
}

TEST(LimitDiagonalBasis, ZeroOperator) {
  const auto b = limit_diagonal_basis(ComplexMatrix::Zero(8, 8), Frame::coordinates(8, {1, 3, 5}), 0.0);
  const ComplexMatrix c = compress(ComplexMatrix::Zero(8, 8), b.basis);
  EXPECT_EQ(c.cwiseAbs().maxCoeff(), 0.0);
}

TEST(LimitDiagonalBasis, NotConverging) {
  ComplexMatrix a = ComplexMatrix::Zero(8, 8);
  try {
    limit_diagonal_basis(a, Frame::coordinates(8, {0, 1, 2, 3}), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SystemNotConverging);
  }
}
