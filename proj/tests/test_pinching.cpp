#include <gtest/gtest.h>

#include "pinchkit/essrange.hpp"
#include "pinchkit/pinching.hpp"
#include "test_support.hpp"

using namespace pinchkit;
using namespace pinchkit::testing;

namespace {

ComplexMatrix rotation(double angle) {
  return mat({{std::cos(angle), -std::sin(angle)}, {std::sin(angle), std::cos(angle)}});
}

ComplexMatrix jordan3() { return mat({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}); }

}  // namespace

TEST(Pinch, EmptyTargets) {
  const auto cert = pinch(build_host(HostSpec::shift(16)), {}, 0.9);
  EXPECT_TRUE(cert.frames.empty());
  EXPECT_EQ(cert.coverage, 0.0);
}

TEST(Pinch, ThreeTargetsOnShift512) {
  const ComplexMatrix a = build_host(HostSpec::shift(512));
  const std::vector<ComplexMatrix> targets = {mat({{0.3}}), 0.5 * rotation(kPi / 3.0), 0.4 * jordan3()};
  const auto cert = pinch(a, targets, 0.9);
  ASSERT_EQ(cert.frames.size(), 3u);
  EXPECT_LE(cert.max_residual(), 1e-7);
  EXPECT_LE(cert.orthogonality, 1e-10);
  EXPECT_LE(stacked_block_error(a, cert, targets), 1e-7);
  EXPECT_NEAR(cert.coverage, 6.0 / 512.0, 1e-15);
  EXPECT_TRUE(cert.valid());
  EXPECT_EQ(cert.order, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Pinch, BudgetRejection) {
  Rng rng(61);
  std::vector<ComplexMatrix> targets;
  for (int j = 0; j < 10; ++j) targets.push_back(contraction(rng, 2, 0.5));
  try {
    pinch(build_host(HostSpec::shift(16)), targets, 0.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HostTooSmall);
    ASSERT_TRUE(e.index().has_value());
    EXPECT_EQ(*e.index(), 1u);
  }
}

TEST(Pinch, NotStrictContractionNamesTarget) {
  try {
    pinch(build_host(HostSpec::shift(64)), {mat({{0.2}}), mat({{0.95}})}, 0.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotStrictContraction);
    EXPECT_EQ(e.index(), std::optional<std::size_t>(1));
  }
}

TEST(Pinch, MarginLostOnSmallRange) {
  ComplexMatrix a = 0.5 * build_host(HostSpec::shift(64));
  try {
    pinch(a, {mat({{0.2}})}, 0.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MarginLost);
    EXPECT_EQ(e.index(), std::optional<std::size_t>(0));
  }
}

TEST(RealizeWithMass, ScalarTarget) {
  const ComplexMatrix a = build_host(HostSpec::shift(256));
  TestVectorSequence seq(256, 7);
  const ComplexVector h = seq.next();
  const auto r = realize_with_mass(a, mat({{0.3}}), h, 0.8, 1.0);
  EXPECT_EQ(r.plan.l, choose_walsh_level(0.3, 0.8).l);
  EXPECT_LE(std::abs(compress(a, r.frame)(0, 0) - 0.3), 1e-7);
  EXPECT_GE(r.mass, r.plan.epsilon - 1e-8);
  EXPECT_NEAR(std::abs((r.frame.columns().adjoint() * h).norm() - r.mass), 0.0, 1e-12);
  double total = 0.0;
  for (double m : r.block_masses) total += m * m;
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(RealizeWithMass, ZeroTargetOnAZeroValueVector) {
  // With <h, Ah> = 0 the opening frame already compresses A to X = 0.
  const ComplexMatrix a = build_host(HostSpec::shift(64));
  const ComplexVector h = ComplexVector::Unit(64, 10);
  const auto r = realize_with_mass(a, mat({{0.0}}), h, 0.8, 1.0);
  EXPECT_EQ(r.mass, 1.0);
  EXPECT_LE(std::abs(compress(a, r.frame)(0, 0)), 1e-12);
}

TEST(RealizeWithMass, DiagonalTargetOnShift512) {
  const ComplexMatrix a = build_host(HostSpec::shift(512));
  TestVectorSequence seq(512, 9);
  const ComplexMatrix x = mat({{0.2, 0}, {0, 0.2}});
  const auto r = realize_with_mass(a, x, seq.next(), 0.8, 1.0);
  EXPECT_LE((compress(a, r.frame) - x).norm(), 1e-7);
  EXPECT_GE(r.mass, std::pow(2.0, -0.5 * r.plan.l) - 1e-8);
}

TEST(PinchFaithful, MassBoundsArePopulated) {
  const ComplexMatrix a = build_host(HostSpec::shift(256));
  const std::vector<ComplexMatrix> targets = {mat({{0.3}}), mat({{Complex(0.0, -0.2)}})};
  const auto cert = pinch(a, targets, 0.8, {PinchMode::Faithful, PinchMode::Fast});
  ASSERT_TRUE(cert.mass_bounds[0].has_value());
  EXPECT_FALSE(cert.mass_bounds[1].has_value());
  EXPECT_GE(cert.mass_bounds[0]->mass_measured, cert.mass_bounds[0]->epsilon_claimed - 1e-8);
  EXPECT_LE(cert.max_residual(), 1e-7);
  EXPECT_LE(cert.orthogonality, 1e-10);
}

TEST(PinchNormal, DiagonalTargets) {
  const ComplexMatrix a = build_host(HostSpec::shift(128));
  const std::vector<ComplexMatrix> targets = {mat({{Complex(0, 0.5), 0}, {0, -0.5}}), mat({{0.3}})};
  const auto cert = pinch_normal(a, targets, 0.9);
  EXPECT_LE(cert.max_residual(), 1e-8);
  EXPECT_LE(cert.orthogonality, 1e-10);
}

TEST(PinchNormal, ScalarZero) {
  const ComplexMatrix a = build_host(HostSpec::shift(32));
  const auto cert = pinch_normal(a, {mat({{0.0}})}, 0.9);
  ASSERT_EQ(cert.frames.size(), 1u);
  EXPECT_LE(cert.residuals[0], 1e-8);
}

TEST(PinchNormal, RejectsNonNormal) {
  try {
    pinch_normal(build_host(HostSpec::shift(32)), {mat({{0, 0.5}, {0, 0}})}, 0.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormal);
  }
}

TEST(PinchNormal, EigenvalueOutsideDisc) {
  try {
    pinch_normal(build_host(HostSpec::shift(32)), {mat({{0.9}})}, 0.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MarginLost);
  }
}

TEST(WalshRoute, NormalTargetWithZeroCompactPart) {
  const ComplexMatrix a = build_host(HostSpec::shift(128));
  const ComplexMatrix d = mat({{0.3, 0}, {0, Complex(-0.1, 0.2)}});
  const Frame e = realize_normal_via_walsh(a, d, 0.9);
  EXPECT_LE((compress(a, e) - d).norm(), 1e-8);
}

TEST(TestVectors, DeterministicUnitVectors) {
  TestVectorSequence a(20, 3), b(20, 3);
  for (int k = 0; k < 4; ++k) {
    const ComplexVector u = a.next();
    EXPECT_EQ(u, b.next());
    EXPECT_NEAR(u.norm(), 1.0, 1e-14);
  }
}
