// Thin LAPACK bindings for single-eigenpair Hermitian solves.
#pragma once

#include <complex>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pinchkit::lapack {

// Errors here are rethrown as pinchkit::Error(NoConvergence) by callers in core.hpp.
struct LapackFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Top eigenpair of a symmetric tridiagonal matrix (diag, off) via dstevr.
inline std::pair<double, Eigen::VectorXd> symmetric_tridiagonal_top(const Eigen::VectorXd& diag,
                                                                    const Eigen::VectorXd& off,
                                                                    bool want_vector) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  Eigen::VectorXd d = diag;
  Eigen::VectorXd e(n);
  e.setZero();
  for (lapack_int k = 0; k + 1 < n; ++k) e(k) = off(k);
  Eigen::VectorXd w(n);
  Eigen::VectorXd z(want_vector ? n : 1);
  std::vector<lapack_int> isuppz(2);
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, want_vector ? 'V' : 'N', 'I', n, d.data(), e.data(), 0.0, 0.0, n, n, 0.0,
                     &found, w.data(), z.data(), want_vector ? n : 1, isuppz.data());
  if (info != 0 || found != 1) throw LapackFailure("dstevr failed with info " + std::to_string(info));
  return {w(0), want_vector ? z : Eigen::VectorXd()};
}

/// Top eigenpair of a dense Hermitian matrix via zheevr (upper triangle used).
inline std::pair<double, Eigen::VectorXcd> hermitian_top(const Eigen::MatrixXcd& h, bool want_vector) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  Eigen::MatrixXcd work = h;
  Eigen::VectorXd w(n);
  Eigen::VectorXcd z(want_vector ? n : 1);
  std::vector<lapack_int> isuppz(2);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, want_vector ? 'V' : 'N', 'I', 'U', n, work.data(), n, 0.0,
                                         0.0, n, n, 0.0, &found, w.data(), z.data(), want_vector ? n : 1,
                                         isuppz.data());
  if (info != 0 || found != 1) throw LapackFailure("zheevr failed with info " + std::to_string(info));
  return {w(0), want_vector ? z : Eigen::VectorXcd()};
}

}  // namespace pinchkit::lapack
