// Pinchings: mutually orthogonal frames E_j whose compressions of a host
// operator are prescribed contractions X_j.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pinchkit/core.hpp"
#include "pinchkit/realize.hpp"
#include "pinchkit/walsh.hpp"

namespace pinchkit {

enum class PinchMode { Fast, Faithful };

inline const char* to_string(PinchMode mode) { return mode == PinchMode::Fast ? "fast" : "faithful"; }

inline PinchMode pinch_mode_from_string(const std::string& s) {
  if (s == "fast") return PinchMode::Fast;
  if (s == "faithful") return PinchMode::Faithful;
  throw Error(ErrorCode::BadSpec, "mode must be 'fast' or 'faithful', got '" + s + "'");
}

struct MassBound {
  double epsilon_claimed;  // 2^{-l/2}
  double mass_measured;    // |E* h|
  int level;
};

struct PinchingCertificate {
  Eigen::Index ambient_dim = 0;
  std::vector<Frame> frames;
  std::vector<double> residuals;  // Frobenius |E_j* A E_j − X_j|
  double orthogonality = 0.0;     // max over i ≠ j of |E_i* E_j|
  std::vector<std::optional<MassBound>> mass_bounds;
  double coverage = 0.0;
  std::vector<std::size_t> order;
  std::vector<PinchMode> modes;
  std::vector<double> disc_margins;  // deflated-host margin after each extraction
  double tolerance = Tolerances{}.realization;

  double max_residual() const {
    return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
  }

  bool valid(double orth_tol = Tolerances{}.frame_orth) const {
    if (orthogonality > orth_tol || coverage > 1.0) return false;
    for (double r : residuals)
      if (!(r <= tolerance)) return false;
    for (const auto& m : mass_bounds)
      if (m && !(m->mass_measured >= m->epsilon_claimed - tolerance)) return false;
    return true;
  }
};

struct PinchOptions {
  HostOptions host;
  /// Seed of the test-vector sequence used for faithful-mode mass bounds.
  std::uint64_t seed = 0x5eedULL;
  /// Upper bound on |A| assumed by the faithful construction.
  double gamma = 1.0;
  double tolerance = Tolerances{}.realization;
};

/// Deterministic sequence of unit vectors standing in for a dense sequence in
/// the unit sphere: complex Gaussian entries from mt19937_64, normalized.
class TestVectorSequence {
 public:
  TestVectorSequence(Eigen::Index dim, std::uint64_t seed) : dim_(dim), rng_(seed) {}

  ComplexVector next() {
    std::normal_distribution<double> normal;
    ComplexVector v(dim_);
    for (Eigen::Index k = 0; k < dim_; ++k) {
      const double re = normal(rng_);
      const double im = normal(rng_);
      v(k) = Complex(re, im);
    }
    return v / v.norm();
  }

 private:
  Eigen::Index dim_;
  std::mt19937_64 rng_;
};

struct MassRealization {
  Frame frame;
  WalshPlan plan;
  double mass;
  std::vector<double> block_masses;
};

namespace detail {

inline double faithful_budget(const ComplexMatrix& x, int level) {
  const double d = static_cast<double>(x.rows());
  const double per_copy = x.rows() == 1 ? 3.0 : 6.0 * d;
  return 3.0 * d + (std::ldexp(1.0, level) - 1.0) * per_copy;
}

inline double residual(const ComplexMatrix& a, const ComplexMatrix& e, const ComplexMatrix& x) {
  return (e.adjoint() * a * e - x).norm();
}

}  // namespace detail

/// Realizes X on a frame E carrying at least 2^{-l/2} of the unit vector h.
///
/// h' (h projected off the consumed span) opens a d-dimensional frame F_0
/// whose other columns realize the value 0, so A_{F_0} = diag(<h',Ah'>, 0, …).
/// The 2^l − 1 copies X_j = (2^l X − A_{F_0}) / (2^l − 1) are realized in turn;
/// conjugating the block family by V_l ⊗ I gives 2^l frames, each compressing A
/// to the block mean X, and each holding a 2^{-l/2} share of h'. The level
/// starts at choose_walsh_level(|X|, rho) and rises until |X_j| < rho.
inline MassRealization realize_with_mass_in(DeflatedHost& host, const ComplexMatrix& x, const ComplexVector& h,
                                            double rho, double gamma) {
  require_square(x, "target");
  const Eigen::Index d = x.rows();
  const double norm_x = spectral_norm(x);
  WalshPlan plan = choose_walsh_level(norm_x, rho);
  if (host.host_norm_bound() > gamma * (1.0 + 1e-12) && spectral_norm(host.host()) > gamma * (1.0 + 1e-12))
    throw Error(ErrorCode::BadInput, "host norm exceeds gamma");

  ComplexVector hp = host.project(h);
  const double hn = hp.norm();
  if (hn < 1e-8) throw Error(ErrorCode::BadInput, "test vector lies in the consumed span");
  hp /= hn;

  const ComplexMatrix& a = host.host();
  const Complex a0 = hp.dot(a * hp);
  ComplexMatrix a_f0 = ComplexMatrix::Zero(d, d);
  a_f0(0, 0) = a0;

  int level = plan.l;
  ComplexMatrix xj;
  for (;; ++level) {
    if (level > 16) throw Error(ErrorCode::TooLarge, "no walsh level up to 16 makes the split copies strict");
    const double p = std::ldexp(1.0, level);
    xj = (p * x - a_f0) / (p - 1.0);
    if (spectral_norm(xj) < rho) break;
  }
  plan = WalshPlan::for_level(level);
  const bool zero_shortcut = (a_f0 - x).norm() <= Tolerances{}.realization;
  const double budget = zero_shortcut ? 3.0 * static_cast<double>(d) : detail::faithful_budget(x, level);
  if (budget > static_cast<double>(host.available()))
    throw Error(ErrorCode::HostTooSmall, "faithful realization needs " + std::to_string(static_cast<long>(budget)) +
                                             " host dimensions, " + std::to_string(host.available()) + " remain");

  ComplexMatrix f0(host.dim(), d);
  f0.col(0) = hp;
  host.consume(hp);
  for (Eigen::Index k = 1; k < d; ++k) {
    const ComplexVector v = host.realize(0.0);
    host.consume(v);
    f0.col(k) = v;
  }
  if (zero_shortcut) return {Frame(f0, 1e-9), plan, 1.0, {1.0}};

  const auto copies = (Eigen::Index{1} << level) - 1;
  ComplexMatrix q(host.dim(), (copies + 1) * d);
  q.leftCols(d) = f0;
  for (Eigen::Index j = 1; j <= copies; ++j) q.middleCols(j * d, d) = realize_contraction_in(host, xj, rho);

  const ComplexMatrix w = walsh_operator(level, d);
  const ComplexMatrix mixed = q * w.adjoint();
  std::vector<double> masses;
  Eigen::Index best = 0;
  for (Eigen::Index b = 0; b <= copies; ++b) {
    masses.push_back((mixed.middleCols(b * d, d).adjoint() * hp).norm());
    if (masses.back() > masses[static_cast<std::size_t>(best)]) best = b;
  }
  return {Frame(mixed.middleCols(best * d, d), 1e-9), plan, masses[static_cast<std::size_t>(best)],
          std::move(masses)};
}

/// Stand-alone faithful realization on a fresh host.
inline MassRealization realize_with_mass(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexVector& h,
                                         double rho, double gamma, const HostOptions& opts = {}) {
  require_square(a, "host");
  if (h.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "test vector dimension differs from host");
  if (std::abs(h.norm() - 1.0) > 1e-10) throw Error(ErrorCode::BadInput, "test vector must be a unit vector");
  const double nx = spectral_norm(x);
  if (!(nx < rho))
    throw Error(ErrorCode::NotStrictContraction,
                "|X| = " + std::to_string(nx) + " is not below rho = " + std::to_string(rho));
  detail::require_disc(a, rho, opts.disc_angles);
  DeflatedHost host(a, opts);
  return realize_with_mass_in(host, x, h, rho, gamma);
}

namespace detail {

inline void finish_certificate(PinchingCertificate& cert, const ComplexMatrix& a,
                               const std::vector<ComplexMatrix>& targets) {
  Eigen::Index total = 0;
  for (std::size_t i = 0; i < cert.frames.size(); ++i) {
    const auto& e = cert.frames[i].columns();
    cert.residuals.push_back(residual(a, e, targets[i]));
    total += e.cols();
    for (std::size_t j = 0; j < i; ++j)
      cert.orthogonality =
          std::max(cert.orthogonality, (cert.frames[j].columns().adjoint() * e).norm());
  }
  cert.coverage = cert.ambient_dim ? static_cast<double>(total) / static_cast<double>(cert.ambient_dim) : 0.0;
}

inline void require_budget(const std::vector<double>& costs, Eigen::Index capacity) {
  double used = 0.0;
  for (std::size_t j = 0; j < costs.size(); ++j) {
    used += costs[j];
    if (used > static_cast<double>(capacity))
      throw Error(ErrorCode::HostTooSmall,
                  "target " + std::to_string(j) + " exceeds the host budget (" + std::to_string(static_cast<long>(used)) +
                      " > " + std::to_string(capacity) + " dimensions)",
                  j);
  }
}

// Re-verifies the disc on the deflated host; failure is reported against the
// next target that would need it.
inline void recheck_disc(DeflatedHost& host, PinchingCertificate& cert, double rho, std::size_t next,
                         std::size_t count) {
  const auto c = host.checkpoint(rho, host.options().recheck_angles);
  cert.disc_margins.push_back(c.margin);
  if (next < count && !c.certified())
    throw Error(ErrorCode::MarginLost,
                "deflated host lost the disc of radius " + std::to_string(rho) + " (margin " +
                    std::to_string(c.margin) + ") before target " + std::to_string(next),
                next);
}

}  // namespace detail

/// Extracts each target in order, deflating the host after every frame.
/// `modes` is either empty (all fast), a single mode for every target, or one
/// mode per target.
inline PinchingCertificate pinch(const ComplexMatrix& a, const std::vector<ComplexMatrix>& targets, double rho,
                                 std::vector<PinchMode> modes = {}, const PinchOptions& opts = {}) {
  require_square(a, "host");
  require_finite(a, "host");
  PinchingCertificate cert;
  cert.ambient_dim = a.rows();
  cert.tolerance = opts.tolerance;
  if (targets.empty()) return cert;
  if (modes.empty()) modes.assign(targets.size(), PinchMode::Fast);
  if (modes.size() == 1) modes.assign(targets.size(), modes.front());
  if (modes.size() != targets.size()) throw Error(ErrorCode::LengthMismatch, "one mode per target expected");

  std::vector<double> costs;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    require_square(targets[j], "target");
    require_finite(targets[j], "target");
    const double nx = spectral_norm(targets[j]);
    if (!(nx < rho))
      throw Error(ErrorCode::NotStrictContraction,
                  "target " + std::to_string(j) + " has norm " + std::to_string(nx) + ", not below rho = " +
                      std::to_string(rho),
                  j);
    costs.push_back(modes[j] == PinchMode::Fast
                        ? static_cast<double>(fast_cost(targets[j]))
                        : detail::faithful_budget(targets[j], choose_walsh_level(nx, rho).l));
  }
  detail::require_budget(costs, a.rows() - opts.host.reserve);
  detail::require_disc(a, rho, opts.host.disc_angles, 0);

  DeflatedHost host(a, opts.host);
  TestVectorSequence tests(a.rows(), opts.seed);
  for (std::size_t j = 0; j < targets.size(); ++j) {
    try {
      if (modes[j] == PinchMode::Fast) {
        cert.frames.emplace_back(realize_contraction_in(host, targets[j], rho), 1e-9);
        cert.mass_bounds.push_back(std::nullopt);
      } else {
        ComplexVector h = tests.next();
        while (host.project(h).norm() < 1e-8) h = tests.next();
        auto r = realize_with_mass_in(host, targets[j], h, rho, opts.gamma);
        cert.frames.push_back(std::move(r.frame));
        cert.mass_bounds.push_back(MassBound{r.plan.epsilon, r.mass, r.plan.l});
      }
    } catch (const Error& err) {
      if (err.code() == ErrorCode::MarginLost || err.code() == ErrorCode::HostTooSmall)
        throw Error(err.code(), "target " + std::to_string(j) + ": " + err.message(), j);
      throw;
    }
    cert.order.push_back(j);
    cert.modes.push_back(modes[j]);
    detail::recheck_disc(host, cert, rho, j + 1, targets.size());
  }
  detail::finish_certificate(cert, a, targets);
  return cert;
}

/// Pinching for normal targets: each target is diagonalized directly and its
/// eigenvalues realized, with no dilation step.
inline PinchingCertificate pinch_normal(const ComplexMatrix& a, const std::vector<ComplexMatrix>& targets, double rho,
                                        const PinchOptions& opts = {}, double strict_margin = 1e-6) {
  require_square(a, "host");
  require_finite(a, "host");
  PinchingCertificate cert;
  cert.ambient_dim = a.rows();
  cert.tolerance = opts.tolerance;
  if (targets.empty()) return cert;

  std::vector<NormalDecomposition> parts;
  std::vector<double> costs;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const auto& x = targets[j];
    require_square(x, "target");
    require_finite(x, "target");
    const double defect = normality_defect(x);
    if (defect > 1e-9)
      throw Error(ErrorCode::NotNormal, "target " + std::to_string(j) + " has |X*X − XX*| = " + std::to_string(defect),
                  j);
    NormalDecomposition nd;
    if (detail::is_diagonal(x)) {
      nd = {ComplexMatrix::Identity(x.rows(), x.rows()), x.diagonal(), 0.0};
    } else {
      nd = diagonalize_normal(x);
    }
    const double top = nd.eigenvalues.size() ? nd.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    if (!(top < rho - strict_margin))
      throw Error(ErrorCode::MarginLost,
                  "target " + std::to_string(j) + " has an eigenvalue of modulus " + std::to_string(top) +
                      " outside the certified disc",
                  j);
    parts.push_back(std::move(nd));
    costs.push_back(3.0 * static_cast<double>(x.rows()));
  }
  detail::require_budget(costs, a.rows() - opts.host.reserve);
  detail::require_disc(a, rho, opts.host.disc_angles, 0);

  DeflatedHost host(a, opts.host);
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const auto& nd = parts[j];
    std::vector<Complex> mu(nd.eigenvalues.data(), nd.eigenvalues.data() + nd.eigenvalues.size());
    try {
      const ComplexMatrix g = realize_diagonal_in(host, mu);
      cert.frames.emplace_back(g * nd.basis.adjoint(), 1e-9);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::MarginLost || err.code() == ErrorCode::HostTooSmall)
        throw Error(err.code(), "target " + std::to_string(j) + ": " + err.message(), j);
      throw;
    }
    cert.mass_bounds.push_back(std::nullopt);
    cert.order.push_back(j);
    cert.modes.push_back(PinchMode::Fast);
    detail::recheck_disc(host, cert, rho, j + 1, targets.size());
  }
  detail::finish_certificate(cert, a, targets);
  return cert;
}

/// Frames of the certificate stacked into one isometry Q; Q*AQ carries the
/// targets as its diagonal blocks.
inline ComplexMatrix stacked_compression(const ComplexMatrix& a, const PinchingCertificate& cert) {
  const Frame q = stack_frames(cert.frames, cert.ambient_dim);
  return compress(a, q);
}

/// Largest deviation of a diagonal block of the stacked compression from its
/// target.
inline double stacked_block_error(const ComplexMatrix& a, const PinchingCertificate& cert,
                                  const std::vector<ComplexMatrix>& targets) {
  const ComplexMatrix m = stacked_compression(a, cert);
  double worst = 0.0;
  Eigen::Index at = 0;
  for (std::size_t j = 0; j < cert.frames.size(); ++j) {
    const Eigen::Index d = cert.frames[j].rank();
    worst = std::max(worst, (m.block(at, at, d, d) - targets[cert.order[j]]).norm());
    at += d;
  }
  return worst;
}

/// Normal-target realization through the Walsh splitting with K = 0: the
/// block family {αD (m copies), 0, 0} is realized and mixed by V_l ⊗ I, and
/// the first mixed frame compresses A to D.
inline Frame realize_normal_via_walsh(const ComplexMatrix& a, const ComplexMatrix& d, double rho,
                                      const HostOptions& opts = {}) {
  require_square(d, "target");
  const double nd = spectral_norm(d);
  const WalshPlan plan = choose_walsh_level(nd, rho);
  const ComplexMatrix k = ComplexMatrix::Zero(d.rows(), d.cols());
  const auto blocks = walsh_splitting_blocks(d, k, plan);
  double cost = 0.0;
  for (const auto& b : blocks) cost += static_cast<double>(fast_cost(b));
  if (cost + static_cast<double>(opts.reserve) > static_cast<double>(a.rows()))
    throw Error(ErrorCode::HostTooSmall, "walsh splitting needs " + std::to_string(static_cast<long>(cost)) +
                                             " host dimensions");
  detail::require_disc(a, rho, opts.disc_angles);
  DeflatedHost host(a, opts);
  const Eigen::Index s = d.rows();
  ComplexMatrix q(a.rows(), static_cast<Eigen::Index>(blocks.size()) * s);
  for (std::size_t j = 0; j < blocks.size(); ++j)
    q.middleCols(static_cast<Eigen::Index>(j) * s, s) = realize_contraction_in(host, blocks[j], rho);
  const ComplexMatrix mixed = q * walsh_operator(plan.l, s).adjoint();
  return Frame(mixed.leftCols(s), 1e-9);
}

}  // namespace pinchkit
