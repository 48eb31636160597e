// Model hosts and finite surrogates for the essential numerical range:
// compressions to the complements of growing coordinate prefixes, and
// block-equalized bases whose diagonal tends to a limit value.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "pinchkit/core.hpp"
#include "pinchkit/matrix_io.hpp"
#include "pinchkit/numrange.hpp"
#include "pinchkit/parker.hpp"

namespace pinchkit {

enum class HostKind {
  TruncatedUnilateralShift,
  TruncatedBilateralShift,
  WeightedShift,
  Diagonal,
  DirectSum,
  MatrixFile,
};

inline const char* to_string(HostKind kind) {
  switch (kind) {
    case HostKind::TruncatedUnilateralShift: return "truncated_unilateral_shift";
    case HostKind::TruncatedBilateralShift: return "truncated_bilateral_shift";
    case HostKind::WeightedShift: return "weighted_shift";
    case HostKind::Diagonal: return "diagonal";
    case HostKind::DirectSum: return "direct_sum";
    case HostKind::MatrixFile: return "matrix_file";
  }
  return "unknown";
}

inline HostKind host_kind_from_string(const std::string& s) {
  for (auto k : {HostKind::TruncatedUnilateralShift, HostKind::TruncatedBilateralShift, HostKind::WeightedShift,
                 HostKind::Diagonal, HostKind::DirectSum, HostKind::MatrixFile})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::BadSpec, "unknown host kind '" + s + "'");
}

/// Description of a model host operator.
///   truncated_unilateral_shift: ones on the first superdiagonal.
///   truncated_bilateral_shift:  the cyclic shift (superdiagonal plus the wrap-around corner).
///   weighted_shift:             `weights` (dim − 1 of them) on the superdiagonal.
///   diagonal:                   diag(values).
///   direct_sum:                 block diagonal of `children`.
///   matrix_file:                JSON matrix read from `path`.
/// The constructed matrix is multiplied by `scale`.
struct HostSpec {
  HostKind kind = HostKind::TruncatedUnilateralShift;
  Eigen::Index dim = 0;
  std::vector<double> weights;
  std::vector<Complex> values;
  std::vector<HostSpec> children;
  std::string path;
  double scale = 1.0;

  static HostSpec shift(Eigen::Index n, double scale = 1.0) {
    HostSpec s;
    s.kind = HostKind::TruncatedUnilateralShift;
    s.dim = n;
    s.scale = scale;
    return s;
  }

  static HostSpec diagonal(std::vector<Complex> values) {
    HostSpec s;
    s.kind = HostKind::Diagonal;
    s.dim = static_cast<Eigen::Index>(values.size());
    s.values = std::move(values);
    return s;
  }
};

inline ComplexMatrix build_host(const HostSpec& spec) {
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) throw Error(ErrorCode::BadSpec, "scale must be positive");
  ComplexMatrix m;
  switch (spec.kind) {
    case HostKind::TruncatedUnilateralShift:
    case HostKind::TruncatedBilateralShift: {
      if (spec.dim < 1) throw Error(ErrorCode::BadSpec, "shift dimension must be positive");
      m = ComplexMatrix::Zero(spec.dim, spec.dim);
      for (Eigen::Index k = 0; k + 1 < spec.dim; ++k) m(k, k + 1) = 1.0;
      if (spec.kind == HostKind::TruncatedBilateralShift) m(spec.dim - 1, 0) += 1.0;
      break;
    }
    case HostKind::WeightedShift: {
      const auto n = static_cast<Eigen::Index>(spec.weights.size()) + 1;
      if (spec.dim != 0 && spec.dim != n)
        throw Error(ErrorCode::BadSpec, "weighted shift needs dim − 1 weights");
      m = ComplexMatrix::Zero(n, n);
      for (Eigen::Index k = 0; k + 1 < n; ++k) m(k, k + 1) = spec.weights[static_cast<std::size_t>(k)];
      break;
    }
    case HostKind::Diagonal: {
      if (spec.values.empty()) throw Error(ErrorCode::BadSpec, "diagonal host needs values");
      const auto n = static_cast<Eigen::Index>(spec.values.size());
      if (spec.dim != 0 && spec.dim != n) throw Error(ErrorCode::BadSpec, "diagonal host dim disagrees with values");
      m = ComplexMatrix::Zero(n, n);
      for (Eigen::Index k = 0; k < n; ++k) m(k, k) = spec.values[static_cast<std::size_t>(k)];
      break;
    }
    case HostKind::DirectSum: {
      if (spec.children.empty()) throw Error(ErrorCode::BadSpec, "direct sum needs children");
      std::vector<ComplexMatrix> parts;
      Eigen::Index n = 0;
      for (const auto& child : spec.children) {
        parts.push_back(build_host(child));
        n += parts.back().rows();
      }
      if (spec.dim != 0 && spec.dim != n) throw Error(ErrorCode::BadSpec, "direct sum dim disagrees with children");
      m = ComplexMatrix::Zero(n, n);
      Eigen::Index at = 0;
      for (const auto& p : parts) {
        m.block(at, at, p.rows(), p.cols()) = p;
        at += p.rows();
      }
      break;
    }
    case HostKind::MatrixFile: {
      m = io::read_matrix_file(spec.path);
      require_square(m, "host matrix");
      if (spec.dim != 0 && spec.dim != m.rows()) throw Error(ErrorCode::BadSpec, "matrix file dim disagrees with spec");
      break;
    }
  }
  if (spec.scale != 1.0) m *= spec.scale;
  return m;
}

struct EssRangeEstimate {
  std::vector<Eigen::Index> removals;
  std::vector<RangeHull> hulls;             // hull of each compression B_n
  std::vector<double> angles;               // shared sample angles
  std::vector<double> intersection_support; // per angle, min over removals

  double min_intersection_support() const {
    return intersection_support.empty() ? 0.0
                                        : *std::min_element(intersection_support.begin(), intersection_support.end());
  }
};

/// Intersects the sampled hulls of the compressions of A to the complements of
/// span{e_1, …, e_n}, n = 0 … max_removal.
inline EssRangeEstimate essential_range_estimate(const ComplexMatrix& a, Eigen::Index max_removal, int n_angles) {
  require_square(a, "host");
  const Eigen::Index n = a.rows();
  if (max_removal < 0 || 2 * max_removal >= n)
    throw Error(ErrorCode::BadInput, "max_removal must be below half the host dimension");
  EssRangeEstimate est;
  est.intersection_support.assign(static_cast<std::size_t>(n_angles), std::numeric_limits<double>::infinity());
  const auto bands = TridiagonalBands::of(a);
  for (Eigen::Index removed = 0; removed <= max_removal; ++removed) {
    // The complement of the first `removed` coordinates is spanned by the
    // trailing coordinates, so the compression is the trailing principal block.
    RangeHull hull = bands ? numerical_range_hull(bands->trailing(removed), n_angles)
                           : numerical_range_hull(ComplexMatrix(a.bottomRightCorner(n - removed, n - removed)), n_angles);
    for (std::size_t k = 0; k < hull.samples.size(); ++k)
      est.intersection_support[k] = std::min(est.intersection_support[k], hull.samples[k].support);
    est.removals.push_back(removed);
    est.hulls.push_back(std::move(hull));
  }
  for (const auto& s : est.hulls.front().samples) est.angles.push_back(s.theta);
  return est;
}

inline EssRangeEstimate essential_range_estimate(const HostSpec& spec, Eigen::Index max_removal, int n_angles) {
  return essential_range_estimate(build_host(spec), max_removal, n_angles);
}

struct DiagonalBlock {
  Eigen::Index start;  // first column in the basis
  Eigen::Index size;
  Complex mean;        // trace of the compression divided by its size
};

struct LimitDiagonalBasis {
  Frame basis;
  Eigen::Index leading;  // complement vectors placed first, outside any block
  std::vector<DiagonalBlock> blocks;
};

/// Completes an orthonormal system {x_n} whose diagonal values tend to lambda
/// into a basis with the same limiting diagonal: block j is spanned by one
/// complement vector y_j and the x_n with 2^{j−1} ≤ n < 2^j, and is Parker
/// equalized so its diagonal is constant at the block's trace mean. Complement
/// vectors left over after the last block come first in the basis.
inline LimitDiagonalBasis limit_diagonal_basis(const ComplexMatrix& a, const Frame& system, Complex lambda) {
  require_square(a, "operator");
  if (a.rows() != system.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "system lives in another space");
  const Eigen::Index n = a.rows();
  const Eigen::Index r = system.rank();
  if (r == n) return {system, 0, {}};
  if (r == 0) throw Error(ErrorCode::SystemNotConverging, "empty system");

  const Eigen::Index tail = std::max<Eigen::Index>(1, r / 4);
  for (Eigen::Index k = r - tail; k < r; ++k) {
    const ComplexVector x = system.column(k);
    if (std::abs(x.dot(a * x) - lambda) > 0.1)
      throw Error(ErrorCode::SystemNotConverging,
                  "diagonal value " + std::to_string(k) + " is farther than 0.1 from the limit");
  }

  const Frame complement = orthonormal_complement(system);
  const Eigen::Index p = complement.rank();

  struct Group {
    std::vector<ComplexVector> vectors;
  };
  std::vector<Group> groups;
  Eigen::Index used_y = 0;
  for (Eigen::Index j = 1; (Eigen::Index{1} << (j - 1)) <= r; ++j) {
    Group g;
    if (used_y < p) g.vectors.push_back(complement.column(used_y++));
    const Eigen::Index lo = Eigen::Index{1} << (j - 1);
    const Eigen::Index hi = std::min<Eigen::Index>((Eigen::Index{1} << j) - 1, r);
    for (Eigen::Index idx = lo; idx <= hi; ++idx) g.vectors.push_back(system.column(idx - 1));
    groups.push_back(std::move(g));
  }

  ComplexMatrix q(n, n);
  Eigen::Index at = 0;
  for (Eigen::Index k = used_y; k < p; ++k) q.col(at++) = complement.column(k);
  const Eigen::Index leading = at;

  std::vector<DiagonalBlock> blocks;
  for (const auto& g : groups) {
    const auto size = static_cast<Eigen::Index>(g.vectors.size());
    ComplexMatrix span(n, size);
    for (Eigen::Index k = 0; k < size; ++k) span.col(k) = g.vectors[static_cast<std::size_t>(k)];
    const ComplexMatrix local = span.adjoint() * a * span;
    const auto parker = parker_equalize(local);
    // B = U M U* is the compression along the columns of span·U*.
    q.middleCols(at, size) = span * parker.unitary.adjoint();
    blocks.push_back({at, size, local.trace() / static_cast<double>(size)});
    at += size;
  }
  return {Frame(std::move(q), 1e-9), leading, std::move(blocks)};
}

}  // namespace pinchkit
