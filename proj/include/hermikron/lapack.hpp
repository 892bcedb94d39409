#pragma once

#include <complex>
#include <vector>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include <Eigen/Dense>

#include "hermikron/error.hpp"

namespace hermikron::lapack {

/// Generalized eigenvalues of the pair (P, Q): det(beta P - alpha Q) = 0.
struct GeneralizedEigenvalues {
  std::vector<std::complex<double>> alpha;
  std::vector<std::complex<double>> beta;
};

/// Wraps zggev without eigenvectors. Inputs are copied (column-major).
inline GeneralizedEigenvalues zggev(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q) {
  const lapack_int n = static_cast<lapack_int>(p.rows());
  Eigen::MatrixXcd a = p;
  Eigen::MatrixXcd b = q;
  GeneralizedEigenvalues out;
  out.alpha.resize(n);
  out.beta.resize(n);
  if (n == 0) return out;
  std::complex<double> dummy;
  const lapack_int info =
      LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, b.data(), n, out.alpha.data(),
                    out.beta.data(), &dummy, 1, &dummy, 1);
  if (info != 0)
    throw Error(ErrorCode::InferenceUnstable, "zggev failed with info " + std::to_string(info));
  return out;
}

}  // namespace hermikron::lapack
