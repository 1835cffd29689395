#include "longclass/gee.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "longclass/errors.hpp"

namespace longclass {

namespace {

constexpr double kCorrClip = 0.99;
constexpr double kDegenerateVar = 1e-14;

Matrix clip_correlation(Matrix r) {
    const Eigen::Index d = r.rows();
    r = 0.5 * (r + r.transpose());
    for (Eigen::Index i = 0; i < d; ++i) {
        r(i, i) = 1.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (i == j) continue;
            r(i, j) = std::clamp(r(i, j), -kCorrClip, kCorrClip);
        }
    }
    return r;
}

} // namespace

Matrix GeeDesign::design_matrix() const {
    if (t < 2 || p < 1) throw ConfigError("GeeDesign: need t >= 2 and p >= 1");
    Matrix z = Matrix::Zero(static_cast<Eigen::Index>(p) * t, 2 * p);
    for (int k = 0; k < t; ++k) {
        for (int l = 0; l < p; ++l) {
            z(static_cast<Eigen::Index>(k) * p + l, 2 * l) = 1.0;
            z(static_cast<Eigen::Index>(k) * p + l, 2 * l + 1) = k + 1;
        }
    }
    return z;
}

GeeFit fit_joint_gee(const Matrix& class_data, const GeeDesign& design, double tol,
                     int max_iter) {
    const int n = static_cast<int>(class_data.rows());
    const int p = design.p, t = design.t;
    const Eigen::Index d = static_cast<Eigen::Index>(p) * t;
    if (n < 3) throw ConfigError("fit_joint_gee: need at least 3 subjects");
    if (class_data.cols() != d) throw ConfigError("fit_joint_gee: data width does not equal p*t");
    if (!class_data.allFinite()) throw DataError("fit_joint_gee: data must be complete");

    const Matrix z = design.design_matrix();
    const Vector xbar = class_data.colwise().mean().transpose();

    GeeFit fit;
    fit.r_t = Matrix::Identity(t, t);
    fit.r_p = Matrix::Identity(p, p);
    fit.a_diag = Vector::Ones(d);
    fit.psi = 1.0;
    fit.beta = Vector::Zero(design.n_params());

    Matrix sigma = Matrix::Identity(d, d);
    for (int iter = 1; iter <= max_iter; ++iter) {
        fit.iterations = iter;

        // Fisher scoring step; D_j = Z and Sigma_j = sigma for every subject
        Matrix zt_si;
        try {
            zt_si = solve_spd(sigma, z, "fit_joint_gee working covariance").transpose();
        } catch (const EstimationError&) {
            throw EstimationError("fit_joint_gee: singular working covariance at iteration " +
                                  std::to_string(iter));
        }
        // summed over subjects; Z and sigma are common, so the sums collapse
        const Matrix info = static_cast<double>(n) * (zt_si * z);
        const Vector score = static_cast<double>(n) * (zt_si * (xbar - z * fit.beta));
        const Vector beta_new = fit.beta + solve_spd(info, score, "fit_joint_gee information");
        const double step = (beta_new - fit.beta).lpNorm<Eigen::Infinity>();
        fit.beta = beta_new;

        // moment re-estimation of A, psi and the working correlations
        const Vector mu = z * fit.beta;
        Matrix resids = class_data.rowwise() - mu.transpose();
        Vector a(d);
        for (Eigen::Index m = 0; m < d; ++m)
            a(m) = resids.col(m).squaredNorm() / std::max(1, n - 1);
        fit.a_diag = a;

        if (a.maxCoeff() < kDegenerateVar) {
            fit.degenerate = true;
            fit.converged = true;
            fit.psi = 0.0;
            fit.r_t = Matrix::Identity(t, t);
            fit.r_p = Matrix::Identity(p, p);
            break;
        }
        if (a.minCoeff() < kDegenerateVar)
            throw EstimationError("fit_joint_gee: a coordinate has zero residual variance");

        // standardized residuals as t x p matrices
        Matrix rt = Matrix::Zero(t, t);
        Matrix rp = Matrix::Zero(p, p);
        double ss = 0.0;
        for (int j = 0; j < n; ++j) {
            Matrix s(t, p);
            for (int k = 0; k < t; ++k)
                for (int l = 0; l < p; ++l) {
                    const Eigen::Index m = static_cast<Eigen::Index>(k) * p + l;
                    s(k, l) = resids(j, m) / std::sqrt(a(m));
                }
            rt.noalias() += s * s.transpose();
            rp.noalias() += s.transpose() * s;
            ss += s.squaredNorm();
        }
        rt /= static_cast<double>(n) * p;
        rp /= static_cast<double>(n) * t;
        // normalize to unit diagonal
        for (int k1 = 0; k1 < t; ++k1)
            for (int k2 = 0; k2 < t; ++k2)
                if (k1 != k2) rt(k1, k2) /= std::sqrt(rt(k1, k1) * rt(k2, k2));
        for (int l1 = 0; l1 < p; ++l1)
            for (int l2 = 0; l2 < p; ++l2)
                if (l1 != l2) rp(l1, l2) /= std::sqrt(rp(l1, l1) * rp(l2, l2));
        fit.r_t = clip_correlation(rt);
        fit.r_p = clip_correlation(rp);

        const double dof = static_cast<double>(n) * d - design.n_params();
        fit.psi = ss / (dof > 0 ? dof : static_cast<double>(n) * d);

        const Vector a_sqrt = a.cwiseSqrt();
        sigma = fit.psi *
                (a_sqrt.asDiagonal() * kron(fit.r_t, fit.r_p) * a_sqrt.asDiagonal());
        sigma = 0.5 * (sigma + sigma.transpose());

        if (step < tol) {
            fit.converged = true;
            break;
        }
    }

    fit.fitted_mu = z * fit.beta;
    if (fit.degenerate) {
        fit.model_cov = Matrix::Zero(d, d);
    } else {
        fit.model_cov = sigma;
    }
    return fit;
}

Matrix gee_sandwich_cov(const GeeFit& fit, const Matrix& class_data, const GeeDesign& design) {
    const int n = static_cast<int>(class_data.rows());
    const Matrix z = design.design_matrix();
    const Matrix zt_si = solve_spd(fit.model_cov, z, "gee_sandwich_cov").transpose();
    Matrix bread = Matrix::Zero(design.n_params(), design.n_params());
    Matrix meat = Matrix::Zero(design.n_params(), design.n_params());
    for (int j = 0; j < n; ++j) {
        const Vector resid = class_data.row(j).transpose() - fit.fitted_mu;
        bread.noalias() += zt_si * z;
        const Vector u = zt_si * resid;
        meat.noalias() += u * u.transpose();
    }
    const Matrix bread_inv = inv_spd(bread, "gee_sandwich_cov bread");
    return bread_inv * meat * bread_inv;
}

GroupParams gee_lda_params(const GeeFit& fit0, int n0, const GeeFit& fit1, int n1) {
    if (fit0.fitted_mu.size() != fit1.fitted_mu.size())
        throw ConfigError("gee_lda_params: incompatible fits");
    GroupParams gp;
    gp.mu0 = fit0.fitted_mu;
    gp.mu1 = fit1.fitted_mu;
    gp.cov = pooled_covariance(fit0.model_cov, n0, fit1.model_cov, n1);
    gp.prior0 = static_cast<double>(n0) / (n0 + n1);
    gp.prior1 = static_cast<double>(n1) / (n0 + n1);
    return gp;
}

} // namespace longclass
