#pragma once

#include <Eigen/Dense>
#include <complex>

#include <lapacke.h>

#include "qbat/errors.hpp"

namespace qbat::lapack {

// Hermitian eigendecomposition (values ascending, vectors in columns).
// Real symmetric input is detected and routed to dsyevd, which is several
// times faster than zheevd on this class of Y-free Hamiltonians.
inline void eigh(const Eigen::MatrixXcd& m, Eigen::VectorXd& values,
                 Eigen::MatrixXcd& vectors) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  values.resize(n);
  if (m.imag().cwiseAbs().maxCoeff() < 1e-14) {
    Eigen::MatrixXd a = m.real();
    lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, values.data());
    if (info != 0) throw NumericalError("dsyevd failed");
    vectors = a.cast<std::complex<double>>();
  } else {
    Eigen::MatrixXcd a = m;
    lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n, values.data());
    if (info != 0) throw NumericalError("zheevd failed");
    vectors = std::move(a);
  }
}

// Eigenvalues only (ascending).
inline Eigen::VectorXd eigvalsh(const Eigen::MatrixXcd& m) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  Eigen::VectorXd values(n);
  if (m.imag().cwiseAbs().maxCoeff() < 1e-14) {
    Eigen::MatrixXd a = m.real();
    lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, values.data());
    if (info != 0) throw NumericalError("dsyevd failed");
  } else {
    Eigen::MatrixXcd a = m;
    lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'N', 'L', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n, values.data());
    if (info != 0) throw NumericalError("zheevd failed");
  }
  return values;
}

}  // namespace qbat::lapack
