// Unitary equalization of a diagonal to Tr(A)/n by plane rotations.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pinchkit/core.hpp"
#include "pinchkit/numrange.hpp"

namespace pinchkit {

struct ParkerResult {
  ComplexMatrix equalized;  // B = U A U*
  ComplexMatrix unitary;    // U
  std::size_t rotations;
};

namespace detail {

// Replaces coordinates (i, j) by q_i = alpha e_i + beta e_j, q_j = −conj(beta) e_i + conj(alpha) e_j
// and conjugates b ← Q* b Q; the accumulated basis is updated in step.
inline void apply_plane_rotation(ComplexMatrix& b, ComplexMatrix& basis, Eigen::Index i, Eigen::Index j, Complex alpha,
                                 Complex beta) {
  const Complex q11 = alpha, q21 = beta, q12 = -std::conj(beta), q22 = std::conj(alpha);
  // Columns: b ← b Q.
  for (Eigen::Index r = 0; r < b.rows(); ++r) {
    const Complex bi = b(r, i), bj = b(r, j);
    b(r, i) = bi * q11 + bj * q21;
    b(r, j) = bi * q12 + bj * q22;
  }
  // Rows: b ← Q* b.
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    const Complex bi = b(i, c), bj = b(j, c);
    b(i, c) = std::conj(q11) * bi + std::conj(q21) * bj;
    b(j, c) = std::conj(q12) * bi + std::conj(q22) * bj;
  }
  for (Eigen::Index r = 0; r < basis.rows(); ++r) {
    const Complex vi = basis(r, i), vj = basis(r, j);
    basis(r, i) = vi * q11 + vj * q21;
    basis(r, j) = vi * q12 + vj * q22;
  }
}

// Moves diagonal entry i of b to `point`, which must lie on the segment
// [b_ii, b_jj]; entry j takes the remainder b_ii + b_jj − point.
inline void rotate_entry_to(ComplexMatrix& b, ComplexMatrix& basis, Eigen::Index i, Eigen::Index j, Complex point) {
  ComplexMatrix m(2, 2);
  m << b(i, i), b(i, j), b(j, i), b(j, j);
  const ComplexVector e1 = ComplexVector::Unit(2, 0);
  const ComplexVector e2 = ComplexVector::Unit(2, 1);
  const ComplexVector u = mix_to_value(m, e1, e2, point);
  apply_plane_rotation(b, basis, i, j, u(0), u(1));
}

}  // namespace detail

/// Parker equalization: returns B = U A U* with every diagonal entry equal to
/// Tr(A)/n. A real-part sweep and then an imaginary-part sweep each pick the
/// max- and min-deviation entries among those not yet fixed and rotate one of
/// them exactly onto the mean, so each sweep needs at most n − 1 rotations.
inline ParkerResult parker_equalize(const ComplexMatrix& a, double tol = 1e-13) {
  require_square(a, "operator");
  require_finite(a, "operator");
  const Eigen::Index n = a.rows();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "empty operator");
  const Complex mean = a.trace() / static_cast<double>(n);
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  ComplexMatrix b = a;
  ComplexMatrix basis = ComplexMatrix::Identity(n, n);
  std::size_t rotations = 0;
  const std::size_t cap = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);

  for (int part = 0; part < 2; ++part) {
    auto coord = [&](Complex z) { return part == 0 ? z.real() : z.imag(); };
    std::vector<bool> fixed(static_cast<std::size_t>(n), false);
    for (Eigen::Index step = 0; step + 1 < n; ++step) {
      Eigen::Index hi = -1, lo = -1;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (fixed[static_cast<std::size_t>(k)]) continue;
        const double dev = coord(b(k, k) - mean);
        if (hi < 0 || dev > coord(b(hi, hi) - mean)) hi = k;
        if (lo < 0 || dev < coord(b(lo, lo) - mean)) lo = k;
      }
      const double dev_hi = coord(b(hi, hi) - mean);
      const double dev_lo = coord(b(lo, lo) - mean);
      if (dev_hi - dev_lo <= tol * scale) break;
      // Fix the entry farther from the mean.
      const bool take_hi = dev_hi > -dev_lo;
      const Eigen::Index i = take_hi ? hi : lo;
      const Eigen::Index j = take_hi ? lo : hi;
      const Complex di = b(i, i), dj = b(j, j);
      const double tau = (coord(mean) - coord(di)) / (coord(dj) - coord(di));
      const Complex point = part == 0 ? di + tau * (dj - di) : mean;
      detail::rotate_entry_to(b, basis, i, j, point);
      fixed[static_cast<std::size_t>(i)] = true;
      if (++rotations > cap) throw Error(ErrorCode::NoConvergence, "plane rotation sweep did not settle");
    }
  }

  const double spread = (b.diagonal().array() - mean).abs().maxCoeff();
  if (spread > 1e-9 * scale) throw Error(ErrorCode::NoConvergence, "diagonal did not settle at the mean");
  return {std::move(b), basis.adjoint(), rotations};
}

}  // namespace pinchkit
