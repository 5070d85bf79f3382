#include "rfa/linalg.hpp"

#include <complex>
#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace rfa {

KernelCounters& kernel_counters() {
  thread_local KernelCounters counters;
  return counters;
}

namespace linalg {

Matrix right_singular_vectors(const Matrix& A) {
  const Eigen::Index n = A.cols();
  if (n == 0) throw LinalgError("right_singular_vectors: matrix has no columns");
  ++kernel_counters().svd;
  if (n == 1) return Matrix::Ones(1, 1);

  // A wide matrix is padded with zero rows so that a full set of right singular vectors exists.
  Matrix a;
  if (A.rows() >= n) {
    a = A;
  } else {
    a = Matrix::Zero(n, n);
    a.topRows(A.rows()) = A;
  }
  const auto m = static_cast<lapack_int>(a.rows());
  const auto nn = static_cast<lapack_int>(n);
  std::vector<double> s(n), superb(n);
  Matrix vt(n, n);
  const lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'A', m, nn,
                                         reinterpret_cast<lapack_complex_double*>(a.data()), m, s.data(),
                                         nullptr, 1, reinterpret_cast<lapack_complex_double*>(vt.data()), nn,
                                         superb.data());
  if (info != 0) throw LinalgError("zgesvd failed with info = " + std::to_string(info));
  if (!vt.allFinite()) throw LinalgError("SVD produced a non-finite singular vector");
  return vt.adjoint();
}

Vector smallest_right_singular_vector(const Matrix& A) {
  const Matrix V = right_singular_vectors(A);
  Vector v = V.col(V.cols() - 1);
  return v / v.norm();
}

std::vector<EigenPair> generalized_eigenvalues(const Matrix& A, const Matrix& B) {
  const auto n = static_cast<lapack_int>(A.rows());
  if (A.cols() != n || B.rows() != n || B.cols() != n)
    throw LinalgError("generalized_eigenvalues: pencil must be square and conformant");
  ++kernel_counters().eig;
  if (n == 0) return {};

  Matrix a = A, b = B;
  std::vector<lapack_complex_double> alpha(n), beta(n);
  const lapack_int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
      reinterpret_cast<lapack_complex_double*>(b.data()), n, alpha.data(), beta.data(), nullptr, 1,
      nullptr, 1);
  if (info != 0) throw LinalgError("zggev failed with info = " + std::to_string(info));

  std::vector<EigenPair> out(n);
  for (lapack_int k = 0; k < n; ++k) {
    out[k].alpha = reinterpret_cast<const complex&>(alpha[k]);
    out[k].beta = reinterpret_cast<const complex&>(beta[k]);
  }
  return out;
}

}  // namespace linalg
}  // namespace rfa
