#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "pinchkit/checks.hpp"
#include "pinchkit/io.hpp"
#include "test_support.hpp"

using namespace pinchkit;
using namespace pinchkit::testing;

TEST(MatrixJson, RoundTripIsExact) {
  Rng rng(71);
  const ComplexMatrix m = gaussian(rng, 3, 4);
  const ComplexMatrix back = io::matrix_from_json(io::json::parse(io::matrix_to_json(m).dump()));
  EXPECT_EQ(m, back);
}

TEST(MatrixJson, AcceptsPlainNumbersAndRejectsRaggedRows) {
  const ComplexMatrix m = io::matrix_from_json(io::json::parse("[[1, [0, 2]], [3.5, 0]]"));
  EXPECT_EQ(m, mat({{1, Complex(0, 2)}, {3.5, 0}}));
  EXPECT_THROW(io::matrix_from_json(io::json::parse("[[1, 2], [3]]")), Error);
}

TEST(HostSpecJson, RoundTrip) {
  HostSpec sum;
  sum.kind = HostKind::DirectSum;
  sum.children = {HostSpec::shift(3, 0.5), HostSpec::diagonal({Complex(0.1, 0.2)})};
  const HostSpec back = io::host_spec_from_json(io::host_spec_to_json(sum));
  EXPECT_EQ(build_host(back), build_host(sum));
}

TEST(JobConfig, GeneratorsNeedSeeds) {
  const auto j = io::json::parse(R"({"host": {"kind": "truncated_unilateral_shift", "dim": 8},
                                     "targets": [{"generator": "contraction", "dim": 2, "norm": 0.5}]})");
  try {
    io::job_config_from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadSpec);
  }
}

TEST(JobConfig, GeneratedTargetsAreDeterministic) {
  const auto j = io::json::parse(R"({"host": {"kind": "truncated_unilateral_shift", "dim": 8},
                                     "targets": [{"generator": "contraction", "dim": 3, "norm": 0.5, "seed": 4},
                                                 {"generator": "normal", "dim": 2, "norm": 0.7, "seed": 5}],
                                     "mode": ["fast", "faithful"]})");
  const auto a = io::job_config_from_json(j);
  const auto b = io::job_config_from_json(j);
  ASSERT_EQ(a.targets.size(), 2u);
  EXPECT_EQ(a.targets[0], b.targets[0]);
  EXPECT_NEAR(spectral_norm(a.targets[0]), 0.5, 1e-12);
  EXPECT_LE(normality_defect(a.targets[1]), 1e-12);
  EXPECT_EQ(a.modes, (std::vector<PinchMode>{PinchMode::Fast, PinchMode::Faithful}));
}

TEST(Certificate, RoundTripReproducesNumbers) {
  const ComplexMatrix a = build_host(HostSpec::shift(64));
  const std::vector<ComplexMatrix> targets = {mat({{0.25}}), mat({{0.1, 0.2}, {0.0, -0.1}})};
  const auto cert = pinch(a, targets, 0.9, {PinchMode::Faithful, PinchMode::Fast});
  const auto text = io::certificate_to_json(cert).dump();
  const auto back = io::certificate_from_json(io::json::parse(text));
  EXPECT_EQ(back.ambient_dim, cert.ambient_dim);
  ASSERT_EQ(back.frames.size(), cert.frames.size());
  for (std::size_t j = 0; j < cert.frames.size(); ++j) EXPECT_EQ(back.frames[j].columns(), cert.frames[j].columns());
  EXPECT_EQ(back.residuals, cert.residuals);
  EXPECT_EQ(back.orthogonality, cert.orthogonality);
  EXPECT_EQ(back.coverage, cert.coverage);
  EXPECT_EQ(back.order, cert.order);
  EXPECT_EQ(back.modes, cert.modes);
  EXPECT_EQ(back.disc_margins, cert.disc_margins);
  EXPECT_EQ(back.tolerance, cert.tolerance);
  ASSERT_TRUE(back.mass_bounds[0].has_value());
  EXPECT_EQ(back.mass_bounds[0]->mass_measured, cert.mass_bounds[0]->mass_measured);
  EXPECT_EQ(back.mass_bounds[0]->epsilon_claimed, cert.mass_bounds[0]->epsilon_claimed);
  EXPECT_FALSE(back.mass_bounds[1].has_value());
  EXPECT_EQ(io::certificate_to_json(back).dump(), text);
}

TEST(BoundaryCsv, HeaderAndRows) {
  const auto hull = numerical_range_hull(build_host(HostSpec::shift(10)), 8);
  const std::string csv = io::boundary_csv(hull);
  EXPECT_EQ(csv.rfind("theta,support,re,im\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST(Svg, FixedViewportAndDegenerateMarker) {
  const auto svg = io::hull_svg(numerical_range_hull(mat({{0.5}}), 8), 0.3);
  EXPECT_NE(svg.find("width=\"800\" height=\"800\""), std::string::npos);
  EXPECT_NE(svg.find("r=\"4\""), std::string::npos);
  const auto poly = io::hull_svg(numerical_range_hull(build_host(HostSpec::shift(10)), 16));
  EXPECT_NE(poly.find("<polygon"), std::string::npos);
}

TEST(Checks, WalshSuitePasses) {
  const auto r = checks::run_suite("walsh");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].ok()) << r[0].detail;
  EXPECT_THROW(checks::run_suite("bogus"), Error);
}
