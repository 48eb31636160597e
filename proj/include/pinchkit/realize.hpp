// Realization of prescribed compressions inside a host operator.
//
// Every realized unit vector e is taken orthogonal to the span of
// {e', Ae', A*e'} for all previously realized e'. The compression of the host
// to the realized vectors is then exactly diagonal, and later vectors never
// couple to earlier ones through A.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pinchkit/core.hpp"
#include "pinchkit/dilation.hpp"
#include "pinchkit/numrange.hpp"

namespace pinchkit {

struct HostOptions {
  /// Angles used to certify the initial disc.
  int disc_angles = 720;
  /// Angles for the disc re-certification after each extracted target.
  int recheck_angles = 32;
  /// Initial and maximal sweep sizes when refreshing attainable values.
  int sample_angles = 32;
  int max_sample_angles = 512;
  /// Host dimensions kept out of every budget.
  Eigen::Index reserve = 4;
  Tolerances tol;
};

/// Host operator together with the span consumed by earlier realizations.
class DeflatedHost {
 public:
  explicit DeflatedHost(ComplexMatrix a, HostOptions opts = {})
      : a_(std::move(a)), consumed_(a_.rows(), 0), opts_(opts) {
    require_square(a_, "host");
    require_finite(a_, "host");
    // sqrt(|A|_1 |A|_inf) bounds the spectral norm without an SVD.
    norm_ = std::sqrt(a_.cwiseAbs().colwise().sum().maxCoeff() * a_.cwiseAbs().rowwise().sum().maxCoeff());
    margin_ = 1e-6 * (1.0 + norm_);
  }

  const ComplexMatrix& host() const noexcept { return a_; }
  const HostOptions& options() const noexcept { return opts_; }
  double host_norm_bound() const noexcept { return norm_; }
  Eigen::Index dim() const noexcept { return a_.rows(); }
  Eigen::Index consumed() const noexcept { return consumed_.cols(); }
  /// Dimensions still usable before touching the reserve.
  Eigen::Index available() const noexcept { return dim() - consumed() - opts_.reserve; }

  ComplexVector project(const ComplexVector& v) const {
    if (consumed_.cols() == 0) return v;
    ComplexVector w = v - consumed_ * (consumed_.adjoint() * v);
    return w - consumed_ * (consumed_.adjoint() * w);
  }

  /// Adds span{e, Ae, A*e} to the consumed subspace.
  void consume(const ComplexVector& e) {
    for (const ComplexVector& w : {ComplexVector(e), ComplexVector(a_ * e), ComplexVector(a_.adjoint() * e)}) {
      const double scale = w.norm();
      if (scale == 0.0) continue;
      ComplexVector r = project(w);
      const double rn = r.norm();
      if (rn <= 1e-10 * scale) continue;
      consumed_.conservativeResize(Eigen::NoChange, consumed_.cols() + 1);
      consumed_.col(consumed_.cols() - 1) = r / rn;
    }
  }

  /// Orthonormal basis of the complement of the consumed span.
  Frame remaining_frame() const {
    if (consumed() == 0) return Frame::identity(dim());
    Eigen::HouseholderQR<ComplexMatrix> qr(consumed_);
    ComplexMatrix full = qr.householderQ() * ComplexMatrix::Identity(dim(), dim());
    return Frame(full.rightCols(dim() - consumed()), 1e-8);
  }

  ComplexMatrix remaining_host(const Frame& remaining) const { return compress(a_, remaining); }

  /// Disc certificate for the deflated host. The hull sweep behind it also
  /// replaces the pool of attainable values.
  DiscCertificate checkpoint(double radius, int n_angles) {
    if (consumed() + 1 > dim()) return {radius, -radius, 0.0};
    const Frame remaining = remaining_frame();
    const ComplexMatrix b = consumed() == 0 ? a_ : remaining_host(remaining);
    const RangeHull hull = numerical_range_hull(b, n_angles);
    double best = std::numeric_limits<double>::infinity();
    double best_theta = 0.0;
    for (const auto& s : hull.samples)
      if (s.support < best) {
        best = s.support;
        best_theta = s.theta;
      }
    for (double theta : {best_theta - kPi / n_angles, best_theta + kPi / n_angles}) {
      const double s = support_value(b, theta);
      if (s < best) {
        best = s;
        best_theta = theta;
      }
    }
    fill_pool(remaining, hull);
    return {radius, best - radius, best_theta};
  }

  /// Unit vector orthogonal to the consumed span with <h, Ah> = lambda.
  /// Throws MarginLost when lambda is not interior to the sampled range of the
  /// deflated host.
  ComplexVector realize(Complex lambda) {
    if (consumed() + 3 > dim() - opts_.reserve)
      throw Error(ErrorCode::HostTooSmall, "no room left in the host for another vector");
    if (!pool_.empty())
      if (auto h = attempt(lambda)) return *h;
    for (int n = opts_.sample_angles; n <= opts_.max_sample_angles; n *= 2) {
      refresh(n);
      if (auto h = attempt(lambda)) return *h;
    }
    throw Error(ErrorCode::MarginLost, "value (" + std::to_string(lambda.real()) + ", " +
                                           std::to_string(lambda.imag()) +
                                           ") is not interior to the deflated host's numerical range");
  }

  std::size_t refreshes() const noexcept { return refreshes_; }

 private:
  std::optional<ComplexVector> attempt(Complex lambda) const {
    std::vector<ValueSample> samples;
    samples.reserve(pool_.size());
    for (const auto& s : pool_) {
      ComplexVector v = project(s.vector);
      const double n = v.norm();
      if (n < 0.2) continue;
      v /= n;
      const Complex value = v.dot(a_ * v);
      samples.push_back({std::move(v), value});
    }
    auto h = realize_from_samples(a_, samples, lambda, margin_);
    if (!h) return std::nullopt;
    ComplexVector e = project(*h);
    e.normalize();
    if (std::abs(e.dot(a_ * e) - lambda) > opts_.tol.realization) return std::nullopt;
    return e;
  }

  void refresh(int n_angles) {
    const Frame remaining = remaining_frame();
    const ComplexMatrix b = consumed() == 0 ? a_ : remaining_host(remaining);
    fill_pool(remaining, numerical_range_hull(b, n_angles));
  }

  void fill_pool(const Frame& remaining, const RangeHull& hull) {
    ++refreshes_;
    pool_.clear();
    for (const auto& s : hull.samples) pool_.push_back({remaining.columns() * s.vector, s.boundary_point});
  }

  ComplexMatrix a_;
  ComplexMatrix consumed_;
  HostOptions opts_;
  double norm_ = 0.0;
  double margin_ = 0.0;
  std::vector<ValueSample> pool_;
  std::size_t refreshes_ = 0;
};

namespace detail {

inline bool is_diagonal(const ComplexMatrix& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (i != j && x(i, j) != 0.0) return false;
  return true;
}

inline bool is_normal(const ComplexMatrix& x, double tol) { return normality_defect(x) <= tol; }

}  // namespace detail

/// Realizes diag(lambdas) as a compression of the deflated host; returns the
/// realized vectors as columns.
inline ComplexMatrix realize_diagonal_in(DeflatedHost& host, const std::vector<Complex>& lambdas) {
  ComplexMatrix e(host.dim(), static_cast<Eigen::Index>(lambdas.size()));
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    try {
      const ComplexVector v = host.realize(lambdas[k]);
      host.consume(v);
      e.col(static_cast<Eigen::Index>(k)) = v;
    } catch (const Error& err) {
      throw Error(err.code(), err.message(), k);
    }
  }
  return e;
}

/// Host dimensions consumed by the fast realization of a d × d target.
inline Eigen::Index fast_cost(const ComplexMatrix& x) {
  const bool normal = x.rows() == 1 || detail::is_normal(x, 1e-12 * (1.0 + x.norm()));
  return (normal ? 3 : 6) * x.rows();
}

/// Realizes a strict contraction X as a compression E*AE. Normal X is
/// diagonalized directly; otherwise (or with `always_dilate`) its normal
/// dilation N = |X| U is diagonalized as N = W diag(mu) W*, diag(mu) is
/// realized on a frame G, and E is the first d columns of G W*.
inline ComplexMatrix realize_contraction_in(DeflatedHost& host, const ComplexMatrix& x, double rho,
                                            bool always_dilate = false) {
  require_square(x, "target");
  const Eigen::Index d = x.rows();
  if (d == 0) return ComplexMatrix(host.dim(), 0);
  const bool normal = !always_dilate && (d == 1 || detail::is_normal(x, 1e-12 * (1.0 + x.norm())));
  ComplexMatrix target = x;
  if (!normal) {
    target = halmos_dilation(x, rho).normal;
  } else if (const double nx = spectral_norm(x); !(nx < rho)) {
    throw Error(ErrorCode::NotStrictContraction,
                "|X| = " + std::to_string(nx) + " is not below rho = " + std::to_string(rho));
  }
  ComplexMatrix w;
  std::vector<Complex> mu;
  if (detail::is_diagonal(target)) {
    w = ComplexMatrix::Identity(target.rows(), target.rows());
    for (Eigen::Index k = 0; k < target.rows(); ++k) mu.push_back(target(k, k));
  } else {
    const auto nd = diagonalize_normal(target);
    w = nd.basis;
    mu.assign(nd.eigenvalues.data(), nd.eigenvalues.data() + nd.eigenvalues.size());
  }
  const ComplexMatrix g = realize_diagonal_in(host, mu);
  const ComplexMatrix f = g * w.adjoint();
  return f.leftCols(d);
}

namespace detail {

inline void require_values_inside(const std::vector<Complex>& lambdas, double rho) {
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    if (!(std::abs(lambdas[k]) < rho))
      throw Error(ErrorCode::ValueOutsideRange,
                  "|lambda_" + std::to_string(k) + "| = " + std::to_string(std::abs(lambdas[k])) +
                      " is not below rho",
                  k);
}

inline void require_disc(const ComplexMatrix& a, double rho, int n_angles, std::size_t index = 0) {
  const auto cert = contains_disc(a, rho, n_angles);
  if (!cert.certified())
    throw Error(ErrorCode::MarginLost,
                "host numerical range does not contain the disc of radius " + std::to_string(rho) + " (margin " +
                    std::to_string(cert.margin) + ")",
                index);
}

}  // namespace detail

/// Orthonormal E with E*AE = diag(lambdas), for |lambda_i| < rho and a host
/// whose numerical range contains the disc of radius rho.
inline Frame realize_diagonal_compression(const ComplexMatrix& a, const std::vector<Complex>& lambdas, double rho,
                                          const HostOptions& opts = {}) {
  require_square(a, "host");
  if (lambdas.empty()) return Frame::empty(a.rows());
  detail::require_values_inside(lambdas, rho);
  const auto needed = 3 * static_cast<Eigen::Index>(lambdas.size()) + opts.reserve;
  if (a.rows() < needed)
    throw Error(ErrorCode::HostTooSmall,
                "host dimension " + std::to_string(a.rows()) + " < " + std::to_string(needed) + " required");
  detail::require_disc(a, rho, opts.disc_angles);
  DeflatedHost host(a, opts);
  return Frame(realize_diagonal_in(host, lambdas), 1e-9);
}

/// Orthonormal E with E*AE = X for a strict contraction |X| < rho.
inline Frame realize_contraction_compression(const ComplexMatrix& a, const ComplexMatrix& x, double rho,
                                             const HostOptions& opts = {}, bool always_dilate = false) {
  require_square(a, "host");
  require_square(x, "target");
  const double nx = spectral_norm(x);
  if (!(nx < rho))
    throw Error(ErrorCode::NotStrictContraction,
                "|X| = " + std::to_string(nx) + " is not below rho = " + std::to_string(rho));
  const Eigen::Index cost = always_dilate ? 6 * x.rows() : fast_cost(x);
  if (a.rows() < cost + opts.reserve)
    throw Error(ErrorCode::HostTooSmall, "host dimension " + std::to_string(a.rows()) + " cannot hold the target");
  detail::require_disc(a, rho, opts.disc_angles);
  DeflatedHost host(a, opts);
  return Frame(realize_contraction_in(host, x, rho, always_dilate), 1e-9);
}

/// Isometry V with V*AV = X through the normal dilation of X.
inline Frame isometry_realize(const ComplexMatrix& a, const ComplexMatrix& x, double rho = 0.9,
                              const HostOptions& opts = {}) {
  return realize_contraction_compression(a, x, rho, opts, /*always_dilate=*/true);
}

}  // namespace pinchkit
