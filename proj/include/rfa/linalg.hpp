#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rfa/common.hpp"

namespace rfa::linalg {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Unit-norm right singular vector belonging to the smallest singular value of A.
/// Works for any shape; when A has fewer rows than columns the result spans the null space.
Vector smallest_right_singular_vector(const Matrix& A);

/// All right singular vectors of A as columns, by decreasing singular value.
Matrix right_singular_vectors(const Matrix& A);

/// Generalized eigenvalue pair (alpha, beta); the eigenvalue is alpha / beta.
struct EigenPair {
  complex alpha;
  complex beta;
};

/// All generalized eigenvalue pairs of the square pencil (A, B), via LAPACK zggev.
std::vector<EigenPair> generalized_eigenvalues(const Matrix& A, const Matrix& B);

}  // namespace rfa::linalg
