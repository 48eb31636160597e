// Numerical range W(A) = {<h, Ah> : |h| = 1}: support-function sweeps, disc
// certificates, realization of interior values, Schur–Horn feasibility and
// finite-rank perturbations that place prescribed values in W(A + R).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pinchkit/core.hpp"
#include "pinchkit/geometry.hpp"

namespace pinchkit {

struct SupportPoint {
  double support;
  Complex boundary_point;
  ComplexVector vector;
};

/// Top eigenpair of Re(e^{-i theta} A). The support value is the top
/// eigenvalue and <v, Av> is a boundary point of W(A) in that direction.
inline SupportPoint support_point(const ComplexMatrix& a, double theta) {
  require_square(a, "operator");
  auto top = top_eigenpair(rotated_real_part(a, theta), true);
  const Complex value = top.vector.dot(a * top.vector);
  return {top.value, value, std::move(top.vector)};
}

/// Support function value only (no eigenvector).
inline double support_value(const ComplexMatrix& a, double theta) {
  require_square(a, "operator");
  return top_eigenpair(rotated_real_part(a, theta), false).value;
}

struct RangeSample {
  double theta;
  double support;
  Complex boundary_point;
  ComplexVector vector;
};

struct RangeHull {
  std::vector<RangeSample> samples;

  std::vector<Complex> boundary_points() const {
    std::vector<Complex> pts;
    pts.reserve(samples.size());
    for (const auto& s : samples) pts.push_back(s.boundary_point);
    return pts;
  }

  double max_support() const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) best = std::max(best, s.support);
    return best;
  }

  double max_modulus() const {
    double best = 0.0;
    for (const auto& s : samples) best = std::max(best, std::abs(s.boundary_point));
    return best;
  }

  /// Boundary points in sweep order with near-duplicates merged.
  std::vector<Complex> polygon(double merge_tol = 1e-12) const {
    std::vector<Complex> out;
    for (const auto& s : samples)
      if (out.empty() || std::abs(s.boundary_point - out.back()) > merge_tol) out.push_back(s.boundary_point);
    while (out.size() > 1 && std::abs(out.front() - out.back()) <= merge_tol) out.pop_back();
    return out;
  }

  bool is_convex(double tol = 1e-8) const { return geometry::is_convex_ccw(polygon(tol), tol); }
};

/// The three bands of a tridiagonal matrix: lower(k) = A(k+1,k),
/// main(k) = A(k,k), upper(k) = A(k,k+1).
struct TridiagonalBands {
  ComplexVector lower, main, upper;

  Eigen::Index dim() const { return main.size(); }

  static std::optional<TridiagonalBands> of(const ComplexMatrix& a) {
    if (!detail::is_tridiagonal(a)) return std::nullopt;
    const Eigen::Index n = a.rows();
    TridiagonalBands b{ComplexVector::Zero(std::max<Eigen::Index>(n - 1, 0)), a.diagonal(),
                       ComplexVector::Zero(std::max<Eigen::Index>(n - 1, 0))};
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      b.lower(k) = a(k + 1, k);
      b.upper(k) = a(k, k + 1);
    }
    return b;
  }

  /// Trailing principal block after dropping the first `removed` coordinates.
  TridiagonalBands trailing(Eigen::Index removed) const {
    const Eigen::Index m = dim() - removed;
    return {lower.tail(std::max<Eigen::Index>(m - 1, 0)), main.tail(m), upper.tail(std::max<Eigen::Index>(m - 1, 0))};
  }

  Complex quadratic_form(const ComplexVector& v) const {
    Complex sum = 0.0;
    for (Eigen::Index k = 0; k < dim(); ++k) {
      Complex av = main(k) * v(k);
      if (k + 1 < dim()) av += upper(k) * v(k + 1);
      if (k > 0) av += lower(k - 1) * v(k - 1);
      sum += std::conj(v(k)) * av;
    }
    return sum;
  }

  SupportPoint support_point(double theta) const {
    const Complex phase = std::polar(1.0, -theta);
    const RealVector diag = (phase * main).real();
    ComplexVector up = ComplexVector::Zero(std::max<Eigen::Index>(dim() - 1, 1));
    for (Eigen::Index k = 0; k + 1 < dim(); ++k) up(k) = 0.5 * (phase * upper(k) + std::conj(phase * lower(k)));
    if (dim() == 1) return {diag(0), main(0), ComplexVector::Ones(1)};
    auto top = detail::top_eigenpair_tridiagonal(diag, up, true);
    const Complex value = quadratic_form(top.vector);
    return {top.value, value, std::move(top.vector)};
  }
};

namespace detail {

template <class SupportAt>
RangeHull sweep_hull(int n_angles, SupportAt&& support_at) {
  if (n_angles < 8) throw Error(ErrorCode::BadInput, "n_angles must be at least 8");
  RangeHull hull;
  hull.samples.reserve(static_cast<std::size_t>(n_angles));
  for (int k = 0; k < n_angles; ++k) {
    const double theta = 2.0 * kPi * k / n_angles;
    auto sp = support_at(theta);
    hull.samples.push_back({theta, sp.support, sp.boundary_point, std::move(sp.vector)});
  }
  return hull;
}

}  // namespace detail

/// Samples the support function of a tridiagonal operator given by its bands.
inline RangeHull numerical_range_hull(const TridiagonalBands& bands, int n_angles) {
  return detail::sweep_hull(n_angles, [&](double theta) { return bands.support_point(theta); });
}

/// Samples the support function at theta_k = 2πk/n_angles.
inline RangeHull numerical_range_hull(const ComplexMatrix& a, int n_angles) {
  require_square(a, "operator");
  require_finite(a, "operator");
  if (a.rows() > 1)
    if (auto bands = TridiagonalBands::of(a)) return numerical_range_hull(*bands, n_angles);
  return detail::sweep_hull(n_angles, [&](double theta) { return support_point(a, theta); });
}

struct DiscCertificate {
  double radius;
  double margin;
  double min_support_theta;

  bool certified() const { return margin > 0.0; }
};

/// Sampled certificate that the closed disc of `radius` about 0 lies in W(A):
/// margin = min_theta support(theta) − radius, with one bisection refinement
/// around the minimizing sample.
inline DiscCertificate contains_disc(const ComplexMatrix& a, double radius, int n_angles = 720) {
  require_square(a, "operator");
  if (radius < 0.0) throw Error(ErrorCode::BadInput, "radius must be non-negative");
  if (n_angles < 8) throw Error(ErrorCode::BadInput, "n_angles must be at least 8");
  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (int k = 0; k < n_angles; ++k) {
    const double theta = 2.0 * kPi * k / n_angles;
    const double s = support_value(a, theta);
    if (s < best) {
      best = s;
      best_theta = theta;
    }
  }
  const double half_step = kPi / n_angles;
  for (double theta : {best_theta - half_step, best_theta + half_step}) {
    const double wrapped = theta < 0.0 ? theta + 2.0 * kPi : theta;
    const double s = support_value(a, wrapped);
    if (s < best) {
      best = s;
      best_theta = wrapped;
    }
  }
  return {radius, best - radius, best_theta};
}

namespace detail {

inline Complex quadratic_form(const ComplexVector& u, const ComplexMatrix& a, const ComplexVector& v) {
  return u.dot(a * v);
}

// Unit vector h in span{x, y} with <h, Ah> = target, for a target on the
// segment between z_x = <x, Ax> and z_y = <y, Ay> (x, y unit, not parallel).
// With h = x + s e^{i phi} y the phase phi is fixed so that the imaginary part of
// e^{-i psi}<h,(A − target)h> vanishes for every s (psi = arg(z_y − z_x)); the
// real part is then a quadratic in s, negative at 0 and positive at infinity.
inline ComplexVector mix_to_value(const ComplexMatrix& a, const ComplexVector& x, const ComplexVector& y,
                                  Complex target) {
  const ComplexVector ax = a * x;
  const ComplexVector ay = a * y;
  const Complex zx = x.dot(ax);
  const Complex zy = y.dot(ay);
  const Complex span = zy - zx;
  const double scale = 1.0 + std::abs(zx) + std::abs(zy);
  if (std::abs(span) <= 1e-15 * scale) return x;
  const Complex rot = std::conj(span) / std::abs(span);
  // Forms of e^{-i psi}(A − target) on {x, y}.
  const Complex axx = rot * (zx - target);
  const Complex ayy = rot * (zy - target);
  const Complex axy = rot * (x.dot(ay) - target * x.dot(y));
  const Complex ayx = rot * (y.dot(ax) - target * y.dot(x));
  const Complex kxy = (axy - std::conj(ayx)) / (2.0 * kI);
  const Complex hxy = 0.5 * (axy + std::conj(ayx));
  double phi = std::abs(kxy) <= 1e-15 * scale ? 0.0 : kPi / 2.0 - std::arg(kxy);
  double b = 2.0 * (std::polar(1.0, phi) * hxy).real();
  if (b < 0.0) {
    phi += kPi;
    b = -b;
  }
  const double c0 = axx.real();
  const double a2 = ayy.real();
  if (c0 >= 0.0) return x;
  if (a2 <= 0.0) return y;
  const double s = -2.0 * c0 / (b + std::sqrt(b * b - 4.0 * a2 * c0));
  ComplexVector h = x + s * std::polar(1.0, phi) * y;
  const double norm = h.norm();
  if (!(norm > 1e-300)) throw Error(ErrorCode::NoConvergence, "degenerate mixing pair");
  return h / norm;
}

// Newton refinement of <h, Ah> = target over h(t, phi) = cos t u1 + e^{i phi} sin t u2,
// {u1, u2} an orthonormal basis of span{x, y}.
inline ComplexVector newton_polish(const ComplexMatrix& a, const ComplexVector& x, const ComplexVector& y,
                                   ComplexVector h, Complex target, double tol) {
  Complex residual = detail::quadratic_form(h, a, h) - target;
  if (std::abs(residual) <= tol) return h;
  ComplexVector u1 = x;
  ComplexVector u2 = y - x * x.dot(y);
  const double n2 = u2.norm();
  if (n2 < 1e-12) return h;
  u2 /= n2;
  const Complex m11 = quadratic_form(u1, a, u1), m12 = quadratic_form(u1, a, u2);
  const Complex m21 = quadratic_form(u2, a, u1), m22 = quadratic_form(u2, a, u2);
  Complex alpha = u1.dot(h), beta = u2.dot(h);
  if (std::abs(alpha) > 0.0) {
    beta *= std::conj(alpha) / std::abs(alpha);
    alpha = std::abs(alpha);
  }
  double t = std::atan2(std::abs(beta), alpha.real());
  double phi = std::arg(beta);
  auto eval = [&](double tt, double pp) {
    const double c = std::cos(tt), s = std::sin(tt);
    const Complex e = std::polar(1.0, pp);
    return c * c * m11 + s * s * m22 + c * s * (e * m12 + std::conj(e) * m21) - target;
  };
  Complex f = eval(t, phi);
  for (int iter = 0; iter < 8 && std::abs(f) > tol; ++iter) {
    const double c = std::cos(t), s = std::sin(t);
    const Complex e = std::polar(1.0, phi);
    const Complex dt = -2.0 * c * s * m11 + 2.0 * c * s * m22 + (c * c - s * s) * (e * m12 + std::conj(e) * m21);
    const Complex dp = c * s * (kI * e * m12 - kI * std::conj(e) * m21);
    const double det = dt.real() * dp.imag() - dp.real() * dt.imag();
    if (std::abs(det) < 1e-14) break;
    const double step_t = (-f.real() * dp.imag() + dp.real() * f.imag()) / det;
    const double step_p = (-dt.real() * f.imag() + dt.imag() * f.real()) / det;
    const Complex trial = eval(t + step_t, phi + step_p);
    if (std::abs(trial) >= std::abs(f)) break;
    t += step_t;
    phi += step_p;
    f = trial;
  }
  ComplexVector refined = std::cos(t) * u1 + std::polar(std::sin(t), phi) * u2;
  refined.normalize();
  const Complex refined_residual = quadratic_form(refined, a, refined) - target;
  return std::abs(refined_residual) < std::abs(residual) ? refined : h;
}

}  // namespace detail

/// A unit vector together with its attained value <v, Av>.
struct ValueSample {
  ComplexVector vector;
  Complex value;
};

/// Realizes `target` from a finite set of attainable values. Returns nullopt
/// when the target is not inside their convex hull with the requested margin.
/// Chord rule: the horizontal line through the target, or the vertical one
/// when the horizontal chord is shorter than 1e-8.
inline std::optional<ComplexVector> realize_from_samples(const ComplexMatrix& a, const std::vector<ValueSample>& samples,
                                                         Complex target, double margin) {
  if (samples.empty()) return std::nullopt;
  std::vector<geometry::Point> values;
  values.reserve(samples.size());
  double scale = 1.0;
  for (const auto& s : samples) {
    values.push_back(s.value);
    scale = std::max(scale, std::abs(s.value));
  }
  const double flat_tol = 1e-12 * scale;
  const double polish_tol = 1e-15 * scale;

  auto hull = geometry::convex_hull(values);
  std::vector<geometry::Point> hull_pts;
  for (auto i : hull) hull_pts.push_back(values[i]);

  std::size_t ia = 0, ib = 0;
  const double width = geometry::thickness(hull_pts, &ia, &ib);
  const double diameter = hull_pts.size() > 1 ? std::abs(hull_pts[ib] - hull_pts[ia]) : 0.0;

  if (diameter <= flat_tol) {
    const auto& s = samples[hull.empty() ? 0 : hull[0]];
    if (std::abs(s.value - target) <= margin) return s.vector;
    return std::nullopt;
  }

  if (hull_pts.size() < 3 || width <= flat_tol) {
    // Segment-shaped range (e.g. Hermitian A): use the relative interior.
    const auto& sa = samples[hull[ia]];
    const auto& sb = samples[hull[ib]];
    const Complex d = sb.value - sa.value;
    const double along = ((target - sa.value) * std::conj(d)).real() / std::abs(d);
    const double off = std::abs(geometry::cross(d, target - sa.value)) / std::abs(d);
    if (off > flat_tol || along < margin || along > std::abs(d) - margin) return std::nullopt;
    ComplexVector h = detail::mix_to_value(a, sa.vector, sb.vector, target);
    return detail::newton_polish(a, sa.vector, sb.vector, std::move(h), target, polish_tol);
  }

  if (geometry::interior_margin(hull_pts, target) < margin) return std::nullopt;

  struct Crossing {
    double coord;
    std::size_t edge;
    double tau;
  };
  auto chord = [&](bool horizontal) -> std::optional<std::pair<Crossing, Crossing>> {
    std::vector<Crossing> xs;
    const std::size_t m = hull_pts.size();
    for (std::size_t i = 0; i < m; ++i) {
      const auto p = hull_pts[i];
      const auto q = hull_pts[(i + 1) % m];
      const double pl = horizontal ? p.imag() : p.real();
      const double ql = horizontal ? q.imag() : q.real();
      const double level = horizontal ? target.imag() : target.real();
      if ((pl - level) * (ql - level) > 0.0 || pl == ql) continue;
      const double tau = (level - pl) / (ql - pl);
      const auto point = p + tau * (q - p);
      xs.push_back({horizontal ? point.real() : point.imag(), i, tau});
    }
    if (xs.empty()) return std::nullopt;
    auto [lo, hi] = std::minmax_element(xs.begin(), xs.end(),
                                        [](const Crossing& u, const Crossing& v) { return u.coord < v.coord; });
    return std::make_pair(*lo, *hi);
  };
  auto found = chord(true);
  if (!found || found->second.coord - found->first.coord < 1e-8) found = chord(false);
  if (!found) return std::nullopt;
  const auto endpoints = *found;

  auto lift = [&](const Crossing& c) {
    const std::size_t m = hull.size();
    const auto& sp = samples[hull[c.edge]];
    const auto& sq = samples[hull[(c.edge + 1) % m]];
    const Complex point = sp.value + c.tau * (sq.value - sp.value);
    ComplexVector v = detail::mix_to_value(a, sp.vector, sq.vector, point);
    return detail::newton_polish(a, sp.vector, sq.vector, std::move(v), point, polish_tol);
  };
  const ComplexVector x = lift(endpoints.first);
  const ComplexVector y = lift(endpoints.second);
  ComplexVector h = detail::mix_to_value(a, x, y, target);
  return detail::newton_polish(a, x, y, std::move(h), target, polish_tol);
}

inline std::vector<ValueSample> to_value_samples(const RangeHull& hull) {
  std::vector<ValueSample> out;
  out.reserve(hull.samples.size());
  for (const auto& s : hull.samples) out.push_back({s.vector, s.boundary_point});
  return out;
}

struct RealizeOptions {
  int n_angles = 64;
  int max_angles = 4096;
  /// Interior margin; defaults to 1e-6 (1 + |A|) with |A| estimated by the
  /// sampled numerical radius.
  std::optional<double> margin;
};

/// Unit vector h with <h, Ah> = lambda for lambda interior to W(A).
inline ComplexVector realize_value(const ComplexMatrix& a, Complex lambda, const RealizeOptions& opts = {}) {
  require_square(a, "operator");
  require_finite(a, "operator");
  for (int n = std::max(opts.n_angles, 8);; n *= 2) {
    const auto hull = numerical_range_hull(a, n);
    const double margin = opts.margin.value_or(1e-6 * (1.0 + hull.max_modulus()));
    if (auto h = realize_from_samples(a, to_value_samples(hull), lambda, margin)) return *h;
    if (n * 2 > opts.max_angles)
      throw Error(ErrorCode::ValueOutsideRange,
                  "value (" + std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) +
                      ") is not interior to the sampled numerical range");
  }
}

struct SchurHornResult {
  enum class Witness { None, SumMismatch, PrefixViolation };
  bool feasible;
  Witness witness;
  std::size_t prefix;  // 1-based, for PrefixViolation
  double diagonal_value;  // sum or prefix sum of the diagonal
  double spectrum_value;  // matching sum of the spectrum
};

/// Finite Schur–Horn test: a real diagonal is attainable for a Hermitian
/// matrix with the given spectrum iff it is majorized by the spectrum.
inline SchurHornResult schur_horn_feasible(std::vector<double> spectrum, std::vector<double> diagonal,
                                           double tol = 1e-9) {
  if (spectrum.size() != diagonal.size())
    throw Error(ErrorCode::LengthMismatch, "spectrum and diagonal lengths differ");
  std::sort(spectrum.begin(), spectrum.end(), std::greater<>());
  std::sort(diagonal.begin(), diagonal.end(), std::greater<>());
  double spec_total = 0.0, diag_total = 0.0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    spec_total += spectrum[i];
    diag_total += diagonal[i];
  }
  if (std::abs(spec_total - diag_total) > tol)
    return {false, SchurHornResult::Witness::SumMismatch, spectrum.size(), diag_total, spec_total};
  double spec_prefix = 0.0, diag_prefix = 0.0;
  for (std::size_t k = 0; k + 1 < spectrum.size(); ++k) {
    spec_prefix += spectrum[k];
    diag_prefix += diagonal[k];
    if (diag_prefix > spec_prefix + tol)
      return {false, SchurHornResult::Witness::PrefixViolation, k + 1, diag_prefix, spec_prefix};
  }
  return {true, SchurHornResult::Witness::None, 0, diag_total, spec_total};
}

/// R = Σ_j (t_j − <f_j, A f_j>) f_j f_j*, so every t_j becomes the diagonal
/// value of A + R along f_j.
inline ComplexMatrix perturb_to_cover(const ComplexMatrix& a, const Frame& f, const std::vector<Complex>& targets) {
  require_square(a, "operator");
  if (a.rows() != f.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "frame does not live in the operator's space");
  if (static_cast<std::size_t>(f.rank()) != targets.size())
    throw Error(ErrorCode::DimensionMismatch, "frame rank must equal the number of targets");
  ComplexMatrix r = ComplexMatrix::Zero(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < f.rank(); ++j) {
    const ComplexVector fj = f.column(j);
    const Complex shift = targets[static_cast<std::size_t>(j)] - fj.dot(a * fj);
    r += shift * fj * fj.adjoint();
  }
  return r;
}

}  // namespace pinchkit
