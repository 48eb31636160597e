// Property suites shared by the `check` command and the acceptance runner.
// Every check draws its random inputs from mt19937_64 with a fixed seed.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pinchkit/core.hpp"
#include "pinchkit/dilation.hpp"
#include "pinchkit/essrange.hpp"
#include "pinchkit/io.hpp"
#include "pinchkit/numrange.hpp"
#include "pinchkit/parker.hpp"
#include "pinchkit/pinching.hpp"
#include "pinchkit/realize.hpp"
#include "pinchkit/walsh.hpp"

namespace pinchkit::checks {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string detail;

  bool within_time() const { return seconds < time_limit; }
  bool ok() const { return passed && within_time(); }
};

namespace detail {

using Rng = std::mt19937_64;

inline ComplexMatrix gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols, double sigma = 1.0) {
  std::normal_distribution<double> normal(0.0, sigma);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    m(k) = Complex(re, im);
  }
  return m;
}

inline ComplexMatrix haar_unitary(Rng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(rng, n, n));
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

// Largest distance in an optimal-greedy matching of two eigenvalue lists.
inline double multiset_distance(const ComplexVector& a, const ComplexVector& b) {
  std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index pick = -1;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(a(i) - b(j));
      if (d < best) {
        best = d;
        pick = j;
      }
    }
    used[static_cast<std::size_t>(pick)] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

inline std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

template <class F>
CheckResult timed(int id, std::string name, double limit, F&& body) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  r.time_limit = limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

/// Walsh orthogonality for k = 1..8 and block equalization for k ≤ 5.
inline CheckResult walsh_suite() {
  return detail::timed(1, "walsh", 1.0, [](CheckResult& r) {
    double orth = 0.0, entry = 0.0;
    for (int k = 1; k <= 8; ++k) {
      const Eigen::MatrixXd v = walsh_matrix(k);
      orth = std::max(orth, (v * v.transpose() - Eigen::MatrixXd::Identity(v.rows(), v.cols())).norm());
      entry = std::max(entry, (v.cwiseAbs().array() - std::pow(2.0, -0.5 * k)).abs().maxCoeff());
    }
    detail::Rng rng(101);
    double block_err = 0.0;
    for (int k = 1; k <= 5; ++k) {
      std::vector<ComplexMatrix> blocks;
      ComplexMatrix mean = ComplexMatrix::Zero(4, 4);
      for (int j = 0; j < (1 << k); ++j) {
        blocks.push_back(detail::gaussian(rng, 4, 4));
        mean += blocks.back();
      }
      mean /= static_cast<double>(1 << k);
      const auto eq = equalize_blocks(blocks);
      for (int j = 0; j < (1 << k); ++j)
        block_err = std::max(block_err, (eq.conjugated.block(4 * j, 4 * j, 4, 4) - mean).norm());
    }
    bool minimal = true;
    for (double nx : {0.0, 0.1, 0.3, 0.5, 0.7, 0.85}) {
      const auto plan = choose_walsh_level(nx, 0.9);
      const double p = std::ldexp(1.0, plan.l);
      minimal = minimal && p / (p - 2.0) * nx < 0.9;
      if (plan.l > 2) minimal = minimal && !((p / 2.0) / (p / 2.0 - 2.0) * nx < 0.9);
    }
    r.passed = orth <= 1e-12 && entry <= 1e-15 && block_err <= 1e-10 && minimal;
    r.detail = "orthogonality " + detail::fmt(orth) + ", block mean error " + detail::fmt(block_err) +
               (minimal ? ", level minimal" : ", level NOT minimal");
  });
}

/// Parker equalization of 50 random 64 × 64 matrices.
inline CheckResult parker_suite() {
  return detail::timed(2, "parker", 10.0, [](CheckResult& r) {
    detail::Rng rng(202);
    double diag_err = 0.0, eig_err = 0.0, unit_err = 0.0;
    for (int t = 0; t < 50; ++t) {
      const ComplexMatrix a = detail::gaussian(rng, 64, 64, 1.0 / 8.0);
      const auto res = parker_equalize(a);
      const Complex mean = a.trace() / 64.0;
      diag_err = std::max(diag_err, (res.equalized.diagonal().array() - mean).abs().maxCoeff());
      unit_err = std::max(unit_err, unitarity_defect(res.unitary));
      const ComplexVector ea = Eigen::ComplexEigenSolver<ComplexMatrix>(a, false).eigenvalues();
      const ComplexVector eb = Eigen::ComplexEigenSolver<ComplexMatrix>(res.equalized, false).eigenvalues();
      eig_err = std::max(eig_err, detail::multiset_distance(ea, eb));
    }
    r.passed = diag_err <= 1e-9 && eig_err <= 1e-8 && unit_err <= 1e-10;
    r.detail = "diagonal spread " + detail::fmt(diag_err) + ", eigenvalue drift " + detail::fmt(eig_err) +
               ", unitarity " + detail::fmt(unit_err);
  });
}

/// Halmos dilation of 200 random strict contractions.
inline CheckResult dilation_suite() {
  return detail::timed(3, "dilation", 5.0, [](CheckResult& r) {
    detail::Rng rng(303);
    std::uniform_int_distribution<int> dim(1, 8);
    std::uniform_real_distribution<double> norm(0.0, 0.9);
    double unit_err = 0.0, corner_err = 0.0, normal_err = 0.0;
    for (int t = 0; t < 200; ++t) {
      const int d = dim(rng);
      const double target = norm(rng);
      ComplexMatrix x = detail::gaussian(rng, d, d);
      x *= target / spectral_norm(x);
      const auto dil = halmos_dilation(x, 0.9);
      unit_err = std::max(unit_err, unitarity_defect(dil.unitary));
      corner_err = std::max(corner_err, (dil.normal.topLeftCorner(d, d) - x).cwiseAbs().maxCoeff());
      normal_err = std::max(normal_err, normality_defect(dil.normal));
    }
    r.passed = unit_err <= 1e-10 && corner_err <= 1e-12 && normal_err <= 1e-10;
    r.detail = "unitarity " + detail::fmt(unit_err) + ", corner " + detail::fmt(corner_err) + ", normality " +
               detail::fmt(normal_err);
  });
}

/// Numerical radius of the truncated shift against cos(π/(N+1)) and against
/// a dense eigensolve of its real part.
inline CheckResult shift_radius_check() {
  return detail::timed(4, "shift numerical radius", 5.0, [](CheckResult& r) {
    double err = 0.0, dense_err = 0.0;
    for (int n : {3, 10, 100}) {
      const ComplexMatrix a = build_host(HostSpec::shift(n));
      const double exact = std::cos(kPi / (n + 1));
      err = std::max(err, std::abs(numerical_range_hull(a, 64).max_support() - exact));
      const Eigen::MatrixXd re = (0.5 * (a + a.adjoint())).real();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re, Eigen::EigenvaluesOnly);
      dense_err = std::max(dense_err, std::abs(es.eigenvalues().maxCoeff() - exact));
    }
    r.passed = err <= 1e-6 && dense_err <= 1e-10;
    r.detail = "max support error " + detail::fmt(err) + ", dense real-part oracle " + detail::fmt(dense_err);
  });
}

/// realize_value on 500 random (A, λ) pairs with λ a strict convex combination
/// of three sampled boundary points.
inline CheckResult value_realization_check() {
  return detail::timed(5, "value realization", 30.0, [](CheckResult& r) {
    detail::Rng rng(505);
    std::uniform_int_distribution<int> dim(2, 12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double norm_err = 0.0, value_err = 0.0;
    for (int t = 0; t < 500; ++t) {
      const int n = dim(rng);
      ComplexMatrix a = detail::gaussian(rng, n, n, 1.0 / std::sqrt(static_cast<double>(n)));
      if (t % 10 == 9) a = 0.5 * (a + a.adjoint()).eval();
      const auto hull = numerical_range_hull(a, 64);
      std::uniform_int_distribution<std::size_t> pick(0, hull.samples.size() - 1);
      std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
      while (std::abs(hull.samples[j].boundary_point - hull.samples[i].boundary_point) < 1e-3) j = pick(rng);
      // A Hermitian A has a segment for its hull, with only two distinct boundary points.
      const bool segment = a.isApprox(a.adjoint(), 1e-14);
      while (!segment && (std::abs(hull.samples[k].boundary_point - hull.samples[i].boundary_point) < 1e-3 ||
                          std::abs(hull.samples[k].boundary_point - hull.samples[j].boundary_point) < 1e-3))
        k = pick(rng);
      double w[3] = {0.05 + unit(rng), 0.05 + unit(rng), 0.05 + unit(rng)};
      const double s = w[0] + w[1] + w[2];
      const Complex lambda = (w[0] * hull.samples[i].boundary_point + w[1] * hull.samples[j].boundary_point +
                              w[2] * hull.samples[k].boundary_point) /
                             s;
      const ComplexVector h = realize_value(a, lambda);
      norm_err = std::max(norm_err, std::abs(h.norm() - 1.0));
      value_err = std::max(value_err, std::abs(h.dot(a * h) - lambda));
    }
    r.passed = norm_err <= 1e-12 && value_err <= 1e-8;
    r.detail = "norm error " + detail::fmt(norm_err) + ", value error " + detail::fmt(value_err);
  });
}

/// Isometries V with V*AV = X on shift(128) for 50 random contractions.
inline CheckResult isometry_check() {
  return detail::timed(6, "isometric compressions", 30.0, [](CheckResult& r) {
    detail::Rng rng(606);
    std::uniform_int_distribution<int> dim(1, 4);
    std::uniform_real_distribution<double> norm(0.05, 0.8);
    const ComplexMatrix a = build_host(HostSpec::shift(128));
    double res = 0.0, iso = 0.0;
    for (int t = 0; t < 50; ++t) {
      const int d = dim(rng);
      ComplexMatrix x = detail::gaussian(rng, d, d);
      x *= norm(rng) / spectral_norm(x);
      const Frame v = isometry_realize(a, x, 0.9);
      res = std::max(res, (compress(a, v) - x).norm());
      iso = std::max(iso, v.orthonormality_error());
    }
    r.passed = res <= 1e-8 && iso <= 1e-10;
    r.detail = "max residual " + detail::fmt(res) + ", isometry defect " + detail::fmt(iso);
  });
}

inline std::vector<ComplexMatrix> pinch_targets() {
  detail::Rng rng(707);
  const int dims[6] = {1, 2, 3, 4, 4, 4};
  const double norms[6] = {0.3, 0.5, 0.8, 0.6, 0.7, 0.4};
  std::vector<ComplexMatrix> targets;
  for (int j = 0; j < 6; ++j) {
    ComplexMatrix x = detail::gaussian(rng, dims[j], dims[j]);
    targets.push_back(x * (norms[j] / spectral_norm(x)));
  }
  return targets;
}

/// Six targets of total dimension 18 pinched out of shift(512), fast mode.
inline CheckResult pinching_check() {
  return detail::timed(7, "pinching (fast)", 60.0, [](CheckResult& r) {
    const ComplexMatrix a = build_host(HostSpec::shift(512));
    const auto targets = pinch_targets();
    const auto cert = pinch(a, targets, 0.9);
    const double stacked = stacked_block_error(a, cert, targets);
    r.passed = cert.frames.size() == targets.size() && cert.orthogonality <= 1e-10 && cert.max_residual() <= 1e-7 &&
               stacked <= 1e-7;
    r.detail = "orthogonality " + detail::fmt(cert.orthogonality) + ", max residual " +
               detail::fmt(cert.max_residual()) + ", stacked blocks " + detail::fmt(stacked) + ", coverage " +
               detail::fmt(cert.coverage);
  });
}

inline std::vector<ComplexMatrix> faithful_targets() {
  ComplexMatrix s1(1, 1), s2(2, 2), s3(1, 1);
  s1 << 0.3;
  s2 << Complex(0.2, 0.1), 0.3, 0.0, Complex(-0.1, 0.0);
  s3 << Complex(0.0, -0.5);
  return {s1, s2, s3};
}

/// Faithful-mode masses against the fixed test-vector sequence.
inline CheckResult mass_check() {
  return detail::timed(8, "mass bound (faithful)", 120.0, [](CheckResult& r) {
    const ComplexMatrix a = build_host(HostSpec::shift(512));
    const auto targets = faithful_targets();
    const double rho = 0.8;
    PinchOptions opts;
    opts.gamma = 1.0;
    const auto cert = pinch(a, targets, rho, {PinchMode::Faithful}, opts);
    double worst_gap = std::numeric_limits<double>::infinity();
    bool levels = true;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      const int l = choose_walsh_level(spectral_norm(targets[j]), rho).l;
      const auto& m = cert.mass_bounds[j];
      if (!m) {
        levels = false;
        continue;
      }
      levels = levels && m->level == l;
      worst_gap = std::min(worst_gap, m->mass_measured - std::pow(2.0, -0.5 * l));
    }
    const double stacked = stacked_block_error(a, cert, targets);
    r.passed = levels && worst_gap >= -1e-8 && cert.orthogonality <= 1e-10 && cert.max_residual() <= 1e-7 &&
               stacked <= 1e-7;
    r.detail = "min mass − 2^{-l/2} " + detail::fmt(worst_gap) + ", orthogonality " +
               detail::fmt(cert.orthogonality) + ", max residual " + detail::fmt(cert.max_residual()) +
               (levels ? "" : ", level differs from choose_walsh_level");
  });
}

/// Essential-range surrogate on the shift family.
inline CheckResult essential_range_check() {
  return detail::timed(9, "essential range surrogate", 60.0, [](CheckResult& r) {
    const int angles = 16;
    const auto est = essential_range_estimate(HostSpec::shift(1000), 50, angles);
    const double exact = std::cos(kPi / 951.0);
    double err = 0.0;
    for (double s : est.intersection_support) err = std::max(err, std::abs(s - exact));
    const auto doubled = essential_range_estimate(HostSpec::shift(2000), 50, angles);
    const double lo = est.min_intersection_support();
    const double hi = doubled.min_intersection_support();
    r.passed = err <= 1e-9 && hi > lo && hi < 1.0;
    r.detail = "support error " + detail::fmt(err) + ", estimate " + std::to_string(lo) + " -> " + std::to_string(hi);
  });
}

/// Schur–Horn diagnostic against conjugation witnesses and the 1 − 1/n² sequence.
inline CheckResult schur_horn_check() {
  return detail::timed(10, "Schur-Horn diagnostic", 10.0, [](CheckResult& r) {
    detail::Rng rng(1010);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    int disagreements = 0, bad_witnesses = 0, found_infeasible = 0;
    for (int n = 1; n <= 4; ++n) {
      for (int t = 0; t < 200; ++t) {
        std::vector<double> spec(static_cast<std::size_t>(n));
        for (auto& s : spec) s = unit(rng);
        RealVector lam = Eigen::Map<RealVector>(spec.data(), n);
        // Feasible: the diagonal of a random conjugate is a witness.
        const ComplexMatrix u = detail::haar_unitary(rng, n);
        const ComplexMatrix h = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
        std::vector<double> diag(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) diag[static_cast<std::size_t>(k)] = h(k, k).real();
        if (!schur_horn_feasible(spec, diag).feasible) ++disagreements;
        if (n < 2) continue;
        // Infeasible: push mass from the smallest entry into the largest past
        // the top eigenvalue while keeping the trace.
        auto bad = spec;
        std::sort(bad.begin(), bad.end(), std::greater<>());
        const double push = 0.1 + 0.5 * (unit(rng) + 1.0);
        bad.front() += push;
        bad.back() -= push;
        const auto res = schur_horn_feasible(spec, bad);
        if (res.feasible) {
          ++disagreements;
          continue;
        }
        if (res.witness != SchurHornResult::Witness::PrefixViolation || !(res.diagonal_value > res.spectrum_value))
          ++bad_witnesses;
        // Random conjugations never beat the violated prefix.
        for (int s = 0; s < 20; ++s) {
          const ComplexMatrix v = detail::haar_unitary(rng, n);
          const ComplexMatrix g = v * lam.cast<Complex>().asDiagonal() * v.adjoint();
          std::vector<double> d(static_cast<std::size_t>(n));
          for (int k = 0; k < n; ++k) d[static_cast<std::size_t>(k)] = g(k, k).real();
          std::sort(d.begin(), d.end(), std::greater<>());
          double prefix = 0.0;
          for (std::size_t k = 0; k < res.prefix; ++k) prefix += d[k];
          if (prefix > res.spectrum_value + 1e-9) ++found_infeasible;
        }
      }
    }
    std::vector<double> seq, proj = {1.0, 1.0, 0.0, 0.0};
    for (int n = 1; n <= 4; ++n) seq.push_back(1.0 - 1.0 / (n * n));
    const auto cx = schur_horn_feasible(proj, seq);
    const bool counter = !cx.feasible && cx.witness == SchurHornResult::Witness::SumMismatch &&
                         std::abs(cx.diagonal_value - 2.576389) <= 5e-7 && std::abs(cx.spectrum_value - 2.0) <= 1e-12;
    r.passed = disagreements == 0 && bad_witnesses == 0 && found_infeasible == 0 && counter;
    std::ostringstream s;
    s.precision(7);
    s << disagreements << " disagreements, " << bad_witnesses << " bad witnesses, counterexample sum "
      << cx.diagonal_value << " vs " << cx.spectrum_value;
    r.detail = s.str();
  });
}

/// Three normal targets pinched out of shift(128).
inline CheckResult normal_pinching_check() {
  return detail::timed(11, "pinching (normal targets)", 20.0, [](CheckResult& r) {
    const ComplexMatrix a = build_host(HostSpec::shift(128));
    const std::vector<ComplexMatrix> targets = {io::random_normal(2, 0.8, 1101), io::random_normal(3, 0.8, 1102),
                                                io::random_normal(1, 0.8, 1103)};
    const auto cert = pinch_normal(a, targets, 0.9);
    r.passed = cert.max_residual() <= 1e-8 && cert.orthogonality <= 1e-10;
    r.detail = "max residual " + detail::fmt(cert.max_residual()) + ", orthogonality " +
               detail::fmt(cert.orthogonality);
  });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"walsh", "parker", "dilation", "numrange", "pinch", "all"};
  return names;
}

/// Runs a named suite; throws BadInput for unknown names.
inline std::vector<CheckResult> run_suite(const std::string& name) {
  using Fn = std::function<CheckResult()>;
  std::vector<Fn> fns;
  const bool all = name == "all";
  if (all || name == "walsh") fns.push_back(walsh_suite);
  if (all || name == "parker") fns.push_back(parker_suite);
  if (all || name == "dilation") {
    fns.push_back(dilation_suite);
    fns.push_back(isometry_check);
  }
  if (all || name == "numrange") {
    fns.push_back(shift_radius_check);
    fns.push_back(value_realization_check);
    fns.push_back(essential_range_check);
    fns.push_back(schur_horn_check);
  }
  if (all || name == "pinch") {
    fns.push_back(pinching_check);
    fns.push_back(mass_check);
    fns.push_back(normal_pinching_check);
  }
  if (fns.empty()) throw Error(ErrorCode::BadInput, "unknown suite '" + name + "'");
  std::vector<CheckResult> out;
  for (auto& f : fns) out.push_back(f());
  std::sort(out.begin(), out.end(), [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
  return out;
}

inline io::json results_to_json(const std::string& suite, const std::vector<CheckResult>& results) {
  io::json j;
  j["suite"] = suite;
  io::json items = io::json::array();
  bool all_ok = true;
  for (const auto& r : results) {
    items.push_back({{"id", r.id},
                     {"name", r.name},
                     {"passed", r.ok()},
                     {"seconds", r.seconds},
                     {"time_limit", r.time_limit},
                     {"detail", r.detail}});
    all_ok = all_ok && r.ok();
  }
  j["checks"] = items;
  j["passed"] = all_ok;
  return j;
}

}  // namespace pinchkit::checks
