#include <gtest/gtest.h>

#include "pinchkit/parker.hpp"
#include "test_support.hpp"

using namespace pinchkit;
using namespace pinchkit::testing;

TEST(Parker, DiagonalZeroTwo) {
  const auto r = parker_equalize(mat({{0, 0}, {0, 2}}));
  EXPECT_LE((r.equalized - mat({{1, 1}, {1, 1}})).norm(), 1e-12);
}

TEST(Parker, ConstantDiagonalIsLeftAlone) {
  const ComplexMatrix a = mat({{0, 1}, {0, 0}});
  const auto r = parker_equalize(a);
  EXPECT_LE((r.equalized - a).norm(), 1e-15);
  EXPECT_EQ(r.rotations, 0u);
}

TEST(Parker, UpperTriangularRotationAngle) {
  const auto r = parker_equalize(mat({{1, 1}, {0, 3}}));
  EXPECT_NEAR(std::abs(r.equalized(0, 0) - 2.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.equalized(1, 1) - 2.0), 0.0, 1e-12);
  // B = U A U* with U* = [[c, −s], [s, c]] and θ = ½·arctan 2.
  const double theta = 0.5 * std::atan(2.0);
  EXPECT_NEAR(std::abs(r.unitary(0, 0)), std::cos(theta), 1e-12);
  EXPECT_NEAR(std::abs(r.unitary(0, 1)), std::sin(theta), 1e-12);
}

TEST(Parker, RandomMatricesKeepSpectrum) {
  Rng rng(31);
  for (int n : {1, 3, 17, 64}) {
    const ComplexMatrix a = gaussian(rng, n, n, 1.0 / std::sqrt(static_cast<double>(n)));
    const auto r = parker_equalize(a);
    const Complex mean = a.trace() / static_cast<double>(n);
    EXPECT_LE((r.equalized.diagonal().array() - mean).abs().maxCoeff(), 1e-9);
    EXPECT_LE((r.unitary * r.unitary.adjoint() - ComplexMatrix::Identity(n, n)).norm(), 1e-10);
    EXPECT_LE((r.unitary * a * r.unitary.adjoint() - r.equalized).norm(), 1e-10);
    EXPECT_LE(r.rotations, static_cast<std::size_t>(2 * n));
  }
}

TEST(Parker, HermitianInputStaysHermitian) {
  Rng rng(32);
  const ComplexMatrix h = hermitian(rng, 12);
  const auto r = parker_equalize(h);
  EXPECT_LE((r.equalized - r.equalized.adjoint()).norm(), 1e-12);
}
