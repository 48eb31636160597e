// Shared helpers for the unit tests: seeded random inputs and comparisons.
#pragma once

#include <random>

#include "pinchkit/core.hpp"

namespace pinchkit::testing {

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

inline ComplexMatrix hermitian(Rng& rng, Eigen::Index n) {
  const ComplexMatrix g = gaussian(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

inline Frame random_frame(Rng& rng, Eigen::Index n, Eigen::Index r) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(rng, n, r));
  return Frame(qr.householderQ() * ComplexMatrix::Identity(n, r));
}

inline ComplexMatrix contraction(Rng& rng, Eigen::Index d, double norm) {
  const ComplexMatrix x = gaussian(rng, d, d);
  return x * (norm / spectral_norm(x));
}

inline ComplexMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (auto v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace pinchkit::testing
