// Dense complex linear algebra substrate: matrices, frames, Hermitian
// eigensolvers, PSD square roots and compressions.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pinchkit/lapack.hpp"

namespace pinchkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

enum class ErrorCode {
  NotHermitian,
  NotPSD,
  NoConvergence,
  DimensionMismatch,
  NonFinite,
  NotOrthonormal,
  ValueOutsideRange,
  LengthMismatch,
  BadSpec,
  FileNotFound,
  SystemNotConverging,
  NotStrictContraction,
  MarginLost,
  TooLarge,
  BadBlockCount,
  SizeMismatch,
  HostTooSmall,
  NotNormal,
  BadInput,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::ValueOutsideRange: return "ValueOutsideRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::SystemNotConverging: return "SystemNotConverging";
    case ErrorCode::NotStrictContraction: return "NotStrictContraction";
    case ErrorCode::MarginLost: return "MarginLost";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BadBlockCount: return "BadBlockCount";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::HostTooSmall: return "HostTooSmall";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

/// Library error. `index` names the offending target or entry when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<std::size_t> index_;
};

struct Tolerances {
  double eig_residual = 1e-10;
  double frame_orth = 1e-10;
  double realization = 1e-8;
  double equality = 1e-12;
};

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be square, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
}

/// Largest singular value.
inline double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

/// Hermitian part of e^{-i theta} A, i.e. the operator whose top eigenvalue
/// is the support function of W(A) in direction theta.
inline ComplexMatrix rotated_real_part(const ComplexMatrix& a, double theta) {
  const Complex phase = std::polar(1.0, -theta);
  ComplexMatrix b = phase * a;
  return 0.5 * (b + b.adjoint());
}

/// Matrix with orthonormal columns; identifies a subspace and the isometry onto it.
class Frame {
 public:
  Frame() = default;

  /// Wraps `columns` after checking ‖Q*Q − I‖ ≤ tol.
  explicit Frame(ComplexMatrix columns, double tol = Tolerances{}.frame_orth) : q_(std::move(columns)) {
    require_finite(q_, "frame");
    if (q_.cols() > q_.rows())
      throw Error(ErrorCode::DimensionMismatch, "frame rank exceeds ambient dimension");
    const double err = orthonormality_error();
    if (err > tol)
      throw Error(ErrorCode::NotOrthonormal, "frame columns deviate from orthonormal by " + std::to_string(err));
  }

  static Frame identity(Eigen::Index n) { return Frame(ComplexMatrix::Identity(n, n)); }
  static Frame empty(Eigen::Index n) { return Frame(ComplexMatrix(n, 0)); }

  /// Standard basis vectors with the given indices, in order.
  static Frame coordinates(Eigen::Index n, const std::vector<Eigen::Index>& indices) {
    ComplexMatrix q = ComplexMatrix::Zero(n, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) q(indices[k], static_cast<Eigen::Index>(k)) = 1.0;
    return Frame(std::move(q));
  }

  Eigen::Index ambient_dim() const noexcept { return q_.rows(); }
  Eigen::Index rank() const noexcept { return q_.cols(); }
  const ComplexMatrix& columns() const noexcept { return q_; }
  auto column(Eigen::Index j) const { return q_.col(j); }

  double orthonormality_error() const {
    if (q_.cols() == 0) return 0.0;
    return (q_.adjoint() * q_ - ComplexMatrix::Identity(q_.cols(), q_.cols())).norm();
  }

 private:
  ComplexMatrix q_;
};

struct HermitianEig {
  RealVector eigenvalues;  // ascending
  Frame eigenvectors;
};

inline void require_hermitian(const ComplexMatrix& h, double tol) {
  require_square(h, "Hermitian input");
  require_finite(h, "Hermitian input");
  const double asym = (h - h.adjoint()).norm();
  if (asym > tol * std::max(1.0, h.norm()))
    throw Error(ErrorCode::NotHermitian, "‖H − H*‖ = " + std::to_string(asym));
}

inline HermitianEig hermitian_eig(const ComplexMatrix& h, const Tolerances& tol = {}) {
  require_hermitian(h, tol.equality);
  if (h.rows() == 0) return {RealVector(0), Frame::empty(0)};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
  return {solver.eigenvalues(), Frame(solver.eigenvectors())};
}

struct EigenPair {
  double value;
  ComplexVector vector;
};

namespace detail {

inline bool is_tridiagonal(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(i - j) > 1 && h(i, j) != 0.0) return false;
  return true;
}

// Hermitian tridiagonal H is similar, through D = diag(e^{i phi_k}), to a real
// symmetric tridiagonal T with nonnegative off-diagonal |H(k,k+1)|.
// `diag` holds H(k,k) and `upper` holds H(k,k+1).
inline EigenPair top_eigenpair_tridiagonal(const RealVector& diag, const ComplexVector& upper, bool want_vector) {
  const Eigen::Index n = diag.size();
  RealVector off(std::max<Eigen::Index>(n - 1, 1));
  off.setZero();
  std::vector<Complex> phase(static_cast<std::size_t>(n), Complex(1.0));
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Complex c = upper(k);
    off(k) = std::abs(c);
    const Complex unit = off(k) > 0.0 ? c / off(k) : Complex(1.0);
    phase[static_cast<std::size_t>(k + 1)] = phase[static_cast<std::size_t>(k)] * std::conj(unit);
  }
  auto pair = lapack::symmetric_tridiagonal_top(diag, off, want_vector);
  EigenPair out{pair.first, ComplexVector()};
  if (want_vector) {
    out.vector.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) out.vector(k) = phase[static_cast<std::size_t>(k)] * pair.second(k);
    out.vector.normalize();
  }
  return out;
}

inline EigenPair top_eigenpair_tridiagonal(const ComplexMatrix& h, bool want_vector) {
  const Eigen::Index n = h.rows();
  RealVector diag = h.diagonal().real();
  ComplexVector upper = ComplexVector::Zero(std::max<Eigen::Index>(n - 1, 1));
  for (Eigen::Index k = 0; k + 1 < n; ++k) upper(k) = h(k, k + 1);
  return top_eigenpair_tridiagonal(diag, upper, want_vector);
}

}  // namespace detail

/// Largest eigenvalue of a Hermitian matrix and (optionally) a unit eigenvector.
/// Exactly tridiagonal input goes through the LAPACK tridiagonal solver;
/// everything else through a dense single-eigenpair solve.
inline EigenPair top_eigenpair(const ComplexMatrix& h, bool want_vector = true) {
  if (h.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "empty matrix has no eigenpair");
  if (h.rows() == 1) return {h(0, 0).real(), ComplexVector::Ones(1)};
  try {
    if (detail::is_tridiagonal(h)) return detail::top_eigenpair_tridiagonal(h, want_vector);
    auto pair = lapack::hermitian_top(h, want_vector);
    EigenPair out{pair.first, std::move(pair.second)};
    if (want_vector) out.vector.normalize();
    return out;
  } catch (const lapack::LapackFailure& e) {
    throw Error(ErrorCode::NoConvergence, e.what());
  }
}

/// Dense-only route, kept for cross-checking the tridiagonal path.
inline EigenPair top_eigenpair_dense(const ComplexMatrix& h) {
  try {
    auto pair = lapack::hermitian_top(h, true);
    pair.second.normalize();
    return {pair.first, std::move(pair.second)};
  } catch (const lapack::LapackFailure& e) {
    throw Error(ErrorCode::NoConvergence, e.what());
  }
}

/// Hermitian PSD square root. Eigenvalues in [−eig_residual, 0) are clamped
/// to zero; anything below −100·eig_residual is rejected.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& p, const Tolerances& tol = {}) {
  auto eig = hermitian_eig(p, tol);
  const double scale = std::max(1.0, eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0);
  RealVector roots(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    const double lam = eig.eigenvalues(k);
    if (lam < -100.0 * tol.eig_residual * scale)
      throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(lam) + " is negative");
    roots(k) = std::sqrt(std::max(lam, 0.0));
  }
  const ComplexMatrix& v = eig.eigenvectors.columns();
  ComplexMatrix s = v * roots.asDiagonal() * v.adjoint();
  return 0.5 * (s + s.adjoint());
}

/// Orthonormal basis of the orthogonal complement of span(F).
inline Frame orthonormal_complement(const Frame& f) {
  const Eigen::Index n = f.ambient_dim();
  const Eigen::Index r = f.rank();
  if (r == 0) return Frame::identity(n);
  if (r == n) return Frame::empty(n);
  Eigen::HouseholderQR<ComplexMatrix> qr(f.columns());
  ComplexMatrix full = qr.householderQ() * ComplexMatrix::Identity(n, n);
  ComplexMatrix comp = full.rightCols(n - r);
  // One re-projection pass keeps ‖F*G‖ at rounding level for ill-scaled inputs.
  comp -= f.columns() * (f.columns().adjoint() * comp);
  Eigen::HouseholderQR<ComplexMatrix> qr2(comp);
  ComplexMatrix g = qr2.householderQ() * ComplexMatrix::Identity(n, n - r);
  return Frame(std::move(g));
}

/// Compression E*AE of A to the subspace spanned by the frame.
inline ComplexMatrix compress(const ComplexMatrix& a, const Frame& e) {
  require_square(a, "compressed operator");
  if (a.rows() != e.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "operator dimension " + std::to_string(a.rows()) +
                                                  " does not match frame ambient dimension " +
                                                  std::to_string(e.ambient_dim()));
  return e.columns().adjoint() * a * e.columns();
}

/// Stacks frames side by side; the result must still be orthonormal.
inline Frame stack_frames(const std::vector<Frame>& frames, Eigen::Index ambient, double tol = 1e-9) {
  Eigen::Index total = 0;
  for (const auto& f : frames) {
    if (f.ambient_dim() != ambient) throw Error(ErrorCode::DimensionMismatch, "frames live in different spaces");
    total += f.rank();
  }
  ComplexMatrix q(ambient, total);
  Eigen::Index at = 0;
  for (const auto& f : frames) {
    q.middleCols(at, f.rank()) = f.columns();
    at += f.rank();
  }
  return Frame(std::move(q), tol);
}

/// Departure from normality ‖X*X − XX*‖ (Frobenius).
inline double normality_defect(const ComplexMatrix& x) {
  return (x.adjoint() * x - x * x.adjoint()).norm();
}

}  // namespace pinchkit
