#include <gtest/gtest.h>

#include "pinchkit/essrange.hpp"
#include "pinchkit/realize.hpp"
#include "test_support.hpp"

using namespace pinchkit;
using namespace pinchkit::testing;

TEST(RealizeDiagonal, EmptyTargets) {
  const Frame e = realize_diagonal_compression(build_host(HostSpec::shift(16)), {}, 0.9);
  EXPECT_EQ(e.rank(), 0);
  EXPECT_EQ(e.ambient_dim(), 16);
}

TEST(RealizeDiagonal, TwoValuesOnShift64) {
  const ComplexMatrix a = build_host(HostSpec::shift(64));
  const Frame e = realize_diagonal_compression(a, {0.1, -0.2}, 0.9);
  ASSERT_EQ(e.rank(), 2);
  const ComplexMatrix c = compress(a, e);
  EXPECT_LE((c - mat({{0.1, 0}, {0, -0.2}})).norm(), 1e-8);
  EXPECT_LE(std::abs(c(0, 1)), 1e-8);
  EXPECT_LE(std::abs(c(1, 0)), 1e-8);
}

TEST(RealizeDiagonal, ComplexValuesAreExactlyDiagonal) {
  const ComplexMatrix a = build_host(HostSpec::shift(80));
  const std::vector<Complex> v = {Complex(0.5, 0.5), Complex(-0.7, 0.1), Complex(0.0, -0.85), 0.0,
                                  Complex(0.2, 0.3)};
  const Frame e = realize_diagonal_compression(a, v, 0.9);
  const ComplexMatrix c = compress(a, e);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j)
      EXPECT_LE(std::abs(c(i, j) - (i == j ? v[static_cast<std::size_t>(i)] : Complex(0.0))), 1e-8);
  EXPECT_LE(e.orthonormality_error(), 1e-10);
}

TEST(RealizeDiagonal, ValueOutsideRange) {
  try {
    realize_diagonal_compression(build_host(HostSpec::shift(8)), {0.999}, 0.95);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValueOutsideRange);
    EXPECT_EQ(e.index(), std::optional<std::size_t>(0));
  }
}

TEST(RealizeDiagonal, HostTooSmall) {
  try {
    realize_diagonal_compression(build_host(HostSpec::shift(12)), {0.1, 0.2, 0.3}, 0.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HostTooSmall);
  }
}

TEST(RealizeContraction, Scalar) {
  const ComplexMatrix a = build_host(HostSpec::shift(32));
  const Frame e = realize_contraction_compression(a, mat({{0.3}}), 0.9);
  EXPECT_LE(std::abs(compress(a, e)(0, 0) - 0.3), 1e-8);
}

TEST(RealizeContraction, NilpotentOnShift128) {
  const ComplexMatrix a = build_host(HostSpec::shift(128));
  const ComplexMatrix x = mat({{0, 0.5}, {0, 0}});
  const Frame e = realize_contraction_compression(a, x, 0.9);
  EXPECT_LE((compress(a, e) - x).norm(), 1e-8);
}

TEST(RealizeContraction, DiagonalTargetMatchesDiagonalRealization) {
  const ComplexMatrix a = build_host(HostSpec::shift(64));
  const ComplexMatrix x = mat({{0.2, 0}, {0, Complex(0, 0.4)}});
  const Frame e = realize_contraction_compression(a, x, 0.9);
  const Frame f = realize_diagonal_compression(a, {0.2, Complex(0, 0.4)}, 0.9);
  EXPECT_LE((e.columns() - f.columns()).norm(), 1e-12);
}

TEST(DeflatedHost, ConsumedSpanIsInvariantFree) {
  Rng rng(51);
  const ComplexMatrix a = gaussian(rng, 60, 60, 1.0 / std::sqrt(60.0));
  DeflatedHost host(a);
  const ComplexVector e = host.realize(Complex(0.05, -0.02));
  host.consume(e);
  EXPECT_EQ(host.consumed(), 3);
  const ComplexVector f = host.realize(Complex(-0.03, 0.04));
  EXPECT_LE(std::abs(e.dot(f)), 1e-12);
  EXPECT_LE(std::abs(e.dot(a * f)), 1e-12);
  EXPECT_LE(std::abs(f.dot(a * e)), 1e-12);
}

TEST(DeflatedHost, CheckpointTracksShrinkingMargin) {
  const ComplexMatrix a = build_host(HostSpec::shift(64));
  DeflatedHost host(a);
  const double before = host.checkpoint(0.9, 32).margin;
  realize_diagonal_in(host, {0.1, 0.2, 0.3});
  const double after = host.checkpoint(0.9, 32).margin;
  EXPECT_GT(before, 0.0);
  EXPECT_LE(after, before + 1e-12);
}
