#pragma once

#include <Eigen/Dense>

namespace longclass {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Lower Cholesky factor of a symmetric positive definite matrix.
/// Throws EstimationError naming the first failing leading principal minor.
Matrix cholesky_lower(const Matrix& a, const char* context);

/// True if max|A - A^T| <= tol.
bool is_symmetric(const Matrix& a, double tol = 1e-10);

/// log(det(A)) for symmetric positive definite A; throws EstimationError
/// if A is not positive definite.
double logdet_spd(const Matrix& a, const char* context);

/// Solve A x = b for symmetric positive definite A (never forms A^{-1}).
Vector solve_spd(const Matrix& a, const Vector& b, const char* context);
Matrix solve_spd(const Matrix& a, const Matrix& b, const char* context);

/// Explicit inverse of a symmetric positive definite matrix.
Matrix inv_spd(const Matrix& a, const char* context);

} // namespace longclass
