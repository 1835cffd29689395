#include "longclass/linalg.hpp"

#include <cmath>
#include <string>

#include "longclass/errors.hpp"

namespace longclass {

Matrix cholesky_lower(const Matrix& a, const char* context) {
    const Eigen::Index d = a.rows();
    Matrix l = Matrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        double diag = a(j, j) - l.row(j).head(j).squaredNorm();
        if (!(diag > 0.0) || !std::isfinite(diag)) {
            throw EstimationError(std::string(context) +
                                  ": matrix not positive definite (leading minor of order " +
                                  std::to_string(j + 1) + " not positive)");
        }
        l(j, j) = std::sqrt(diag);
        for (Eigen::Index i = j + 1; i < d; ++i) {
            const double s = a(i, j) - (l.row(i).head(j).cwiseProduct(l.row(j).head(j))).sum();
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

bool is_symmetric(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

double logdet_spd(const Matrix& a, const char* context) {
    const Matrix l = cholesky_lower(a, context);
    return 2.0 * l.diagonal().array().log().sum();
}

Vector solve_spd(const Matrix& a, const Vector& b, const char* context) {
    const Matrix l = cholesky_lower(a, context);
    return l.transpose().triangularView<Eigen::Upper>().solve(
        l.triangularView<Eigen::Lower>().solve(b));
}

Matrix solve_spd(const Matrix& a, const Matrix& b, const char* context) {
    const Matrix l = cholesky_lower(a, context);
    return l.transpose().triangularView<Eigen::Upper>().solve(
        l.triangularView<Eigen::Lower>().solve(b));
}

Matrix inv_spd(const Matrix& a, const char* context) {
    return solve_spd(a, Matrix(Matrix::Identity(a.rows(), a.cols())), context);
}

} // namespace longclass
