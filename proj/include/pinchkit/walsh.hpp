// Walsh matrices V_k and block equalization by W_k = V_k ⊗ I.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pinchkit/core.hpp"

namespace pinchkit {

/// V_1 = (1/√2)[[1, 1], [−1, 1]],  V_k = (1/√2)[[V_{k−1}, V_{k−1}], [−V_{k−1}, V_{k−1}]].
inline Eigen::MatrixXd walsh_matrix(int k) {
  if (k < 1) throw Error(ErrorCode::BadInput, "walsh level must be positive");
  if (k > 16) throw Error(ErrorCode::TooLarge, "walsh level " + std::to_string(k) + " exceeds 16");
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd v(2, 2);
  v << r, r, -r, r;
  for (int level = 2; level <= k; ++level) {
    const Eigen::Index n = v.rows();
    Eigen::MatrixXd next(2 * n, 2 * n);
    next.topLeftCorner(n, n) = r * v;
    next.topRightCorner(n, n) = r * v;
    next.bottomLeftCorner(n, n) = -r * v;
    next.bottomRightCorner(n, n) = r * v;
    v = std::move(next);
  }
  return v;
}

/// W_k = V_k ⊗ I_block.
inline ComplexMatrix walsh_operator(int k, Eigen::Index block) {
  const Eigen::MatrixXd v = walsh_matrix(k);
  const Eigen::Index n = v.rows();
  ComplexMatrix w = ComplexMatrix::Zero(n * block, n * block);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      w.block(i * block, j * block, block, block) = v(i, j) * ComplexMatrix::Identity(block, block);
  return w;
}

inline ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

struct EqualizedBlocks {
  ComplexMatrix conjugated;  // W diag(B_1, …, B_{2^k}) W*
  ComplexMatrix walsh;       // W = V_k ⊗ I
  int level;
};

/// Conjugates a block diagonal operator by V_k ⊗ I; every diagonal block of the
/// result equals the average of the input blocks.
inline EqualizedBlocks equalize_blocks(const std::vector<ComplexMatrix>& blocks) {
  const std::size_t count = blocks.size();
  if (count < 2 || (count & (count - 1)) != 0)
    throw Error(ErrorCode::BadBlockCount, "block count " + std::to_string(count) + " is not a power of two ≥ 2");
  const Eigen::Index size = blocks.front().rows();
  for (const auto& b : blocks)
    if (b.rows() != size || b.cols() != size) throw Error(ErrorCode::SizeMismatch, "blocks must share one square size");
  int k = 0;
  while ((std::size_t{1} << k) < count) ++k;
  ComplexMatrix w = walsh_operator(k, size);
  ComplexMatrix conj = w * block_diagonal(blocks) * w.adjoint();
  return {std::move(conj), std::move(w), k};
}

/// Constants of the splitting X = 2^{-l}(m αD + n β Re K + n β i Im K).
struct WalshPlan {
  int l;
  int m;
  int n;
  double alpha;
  double beta;
  double epsilon;  // 2^{-l/2}

  static WalshPlan for_level(int l) {
    const double p = std::ldexp(1.0, l);
    return {l, static_cast<int>(p) - 2, 1, p / (p - 2.0), p, std::pow(2.0, -0.5 * l)};
  }
};

/// Smallest l ≥ 2 with (2^l / (2^l − 2))·|X| < rho.
inline WalshPlan choose_walsh_level(double norm_x, double rho) {
  if (!(rho < 1.0) || !(rho > 0.0)) throw Error(ErrorCode::BadInput, "rho must lie in (0, 1)");
  if (norm_x < 0.0) throw Error(ErrorCode::BadInput, "norm must be non-negative");
  if (!(norm_x < rho))
    throw Error(ErrorCode::NotStrictContraction,
                "|X| = " + std::to_string(norm_x) + " is not below rho = " + std::to_string(rho));
  for (int l = 2; l <= 16; ++l) {
    const double p = std::ldexp(1.0, l);
    if (p / (p - 2.0) * norm_x < rho) return WalshPlan::for_level(l);
  }
  throw Error(ErrorCode::TooLarge, "no walsh level up to 16 leaves room below rho");
}

/// Block diagonal T whose W_l-conjugate has every diagonal block equal to D + K:
/// m copies of αD, n copies of β Re K and n copies of β i Im K.
inline std::vector<ComplexMatrix> walsh_splitting_blocks(const ComplexMatrix& d, const ComplexMatrix& k,
                                                         const WalshPlan& plan) {
  if (d.rows() != k.rows() || d.cols() != k.cols()) throw Error(ErrorCode::SizeMismatch, "D and K shapes differ");
  const ComplexMatrix re_k = 0.5 * (k + k.adjoint());
  const ComplexMatrix im_k = (k - k.adjoint()) / (2.0 * kI);
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(plan.m + 2 * plan.n));
  for (int j = 0; j < plan.m; ++j) blocks.push_back(plan.alpha * d);
  for (int j = 0; j < plan.n; ++j) blocks.push_back(plan.beta * re_k);
  for (int j = 0; j < plan.n; ++j) blocks.push_back(plan.beta * kI * im_k);
  return blocks;
}

}  // namespace pinchkit
