// Halmos unitary dilation of a strict contraction and its normal rescaling.
#pragma once

#include <cmath>
#include <string>

#include "pinchkit/core.hpp"

namespace pinchkit {

struct DilationResult {
  ComplexMatrix unitary;  // 2d × 2d
  ComplexMatrix normal;   // |X| · unitary
  Eigen::Index original_dim;
  double norm;            // |X|
};

/// U = [[Y, −(I − YY*)^{1/2}], [(I − Y*Y)^{1/2}, Y*]] with Y = X/|X|, and N = |X| U.
/// Both defect roots come from one SVD of X so that U*U = I holds to rounding
/// even where I − Y*Y is singular. X = 0 gives U = I, N = 0.
inline DilationResult halmos_dilation(const ComplexMatrix& x, double rho = 0.9) {
  require_square(x, "contraction");
  require_finite(x, "contraction");
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorCode::BadInput, "rho must lie in (0, 1)");
  const Eigen::Index d = x.rows();
  Eigen::BDCSVD<ComplexMatrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double norm = d ? svd.singularValues()(0) : 0.0;
  if (!(norm < rho))
    throw Error(ErrorCode::NotStrictContraction,
                "|X| = " + std::to_string(norm) + " is not below rho = " + std::to_string(rho));
  if (norm == 0.0) {
    return {ComplexMatrix::Identity(2 * d, 2 * d), ComplexMatrix::Zero(2 * d, 2 * d), d, 0.0};
  }
  const ComplexMatrix& left = svd.matrixU();
  const ComplexMatrix& right = svd.matrixV();
  RealVector defect(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double s = std::min(svd.singularValues()(k) / norm, 1.0);
    defect(k) = std::sqrt((1.0 - s) * (1.0 + s));
  }
  const ComplexMatrix y = x / norm;
  ComplexMatrix u(2 * d, 2 * d);
  u.topLeftCorner(d, d) = y;
  u.topRightCorner(d, d) = -(left * defect.asDiagonal() * left.adjoint());
  u.bottomLeftCorner(d, d) = right * defect.asDiagonal() * right.adjoint();
  u.bottomRightCorner(d, d) = y.adjoint();
  ComplexMatrix n = norm * u;
  return {std::move(u), std::move(n), d, norm};
}

inline double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).norm();
}

struct NormalDecomposition {
  ComplexMatrix basis;     // unitary W with N ≈ W diag(eigenvalues) W*
  ComplexVector eigenvalues;
  double residual;         // |N − W diag W*|
};

/// Unitary diagonalization of a normal matrix via its complex Schur form.
inline NormalDecomposition diagonalize_normal(const ComplexMatrix& n) {
  require_square(n, "normal operator");
  if (n.rows() == 0) return {ComplexMatrix(0, 0), ComplexVector(0), 0.0};
  Eigen::ComplexSchur<ComplexMatrix> schur(n);
  if (schur.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "Schur decomposition failed");
  const ComplexMatrix& w = schur.matrixU();
  ComplexVector mu = schur.matrixT().diagonal();
  const double residual = (n - w * mu.asDiagonal() * w.adjoint()).norm();
  return {w, std::move(mu), residual};
}

}  // namespace pinchkit
