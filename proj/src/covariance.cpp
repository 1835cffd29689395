#include "longclass/covariance.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "longclass/errors.hpp"

namespace longclass {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

Matrix KroneckerCov::full() const { return kron(sigma_t, sigma_p); }

void GroupParams::validate() const {
    const auto d = mu0.size();
    if (mu1.size() != d) throw ConfigError("GroupParams: mean dimension mismatch");
    if (!(prior0 > 0.0) || !(prior1 > 0.0) || std::abs(prior0 + prior1 - 1.0) > 1e-12)
        throw ConfigError("GroupParams: priors must be positive and sum to 1");
    if (std::holds_alternative<Matrix>(cov)) {
        const Matrix& s = std::get<Matrix>(cov);
        if (s.rows() != d || s.cols() != d)
            throw ConfigError("GroupParams: covariance dimension mismatch");
        cholesky_lower(s, "GroupParams");
    } else {
        const KroneckerCov& kc = std::get<KroneckerCov>(cov);
        if (static_cast<Eigen::Index>(kc.t()) * kc.p() != d)
            throw ConfigError("GroupParams: Kronecker factor dimensions do not match means");
        cholesky_lower(kc.sigma_t, "GroupParams sigma_t");
        cholesky_lower(kc.sigma_p, "GroupParams sigma_p");
    }
}

Matrix pooled_covariance(const Matrix& cov0, int n0, const Matrix& cov1, int n1) {
    if (n0 < 2 || n1 < 2) throw ConfigError("pooled_covariance: class sizes must be >= 2");
    if (cov0.rows() != cov0.cols() || cov1.rows() != cov1.cols() || cov0.rows() != cov1.rows())
        throw ConfigError("pooled_covariance: dimension mismatch");
    const double w0 = n0 - 1, w1 = n1 - 1;
    Matrix pooled = (w0 * cov0 + w1 * cov1) / (w0 + w1);
    return 0.5 * (pooled + pooled.transpose());
}

KroneckerCov pooled_kronecker(const KroneckerCov& f0, int n0, const KroneckerCov& f1, int n1) {
    KroneckerCov out;
    out.sigma_t = pooled_covariance(f0.sigma_t, n0, f1.sigma_t, n1);
    out.sigma_p = pooled_covariance(f0.sigma_p, n0, f1.sigma_p, n1);
    return out;
}

FlipFlopResult flip_flop(const Matrix& data_centered, int p, int t, double tol, int max_iter,
                         const Matrix& sigma_p_init) {
    const int n = static_cast<int>(data_centered.rows());
    if (p < 1 || t < 1 || data_centered.cols() != static_cast<Eigen::Index>(p) * t)
        throw ConfigError("flip_flop: data width does not equal p*t");
    if (!(static_cast<long>(n) * p > t && static_cast<long>(n) * t > p))
        throw EstimationError("flip_flop: factors not estimable (need n*p > t and n*t > p)");

    // subject matrices, row k = time k
    std::vector<Matrix> xs;
    xs.reserve(n);
    for (int j = 0; j < n; ++j) {
        Matrix x(t, p);
        for (int k = 0; k < t; ++k)
            for (int l = 0; l < p; ++l) x(k, l) = data_centered(j, k * p + l);
        xs.push_back(std::move(x));
    }

    Matrix sigma_p = sigma_p_init.size() == 0 ? Matrix::Identity(p, p) : sigma_p_init;
    Matrix sigma_t = Matrix::Identity(t, t);
    Matrix prev_kron = kron(sigma_t, sigma_p);

    FlipFlopResult res;
    for (int iter = 1; iter <= max_iter; ++iter) {
        Matrix sigma_p_inv;
        try {
            sigma_p_inv = inv_spd(sigma_p, "flip_flop sigma_p");
        } catch (const EstimationError&) {
            throw EstimationError("flip_flop: variable factor singular at iteration " +
                                  std::to_string(iter));
        }
        Matrix st = Matrix::Zero(t, t);
        for (const Matrix& x : xs) st += x * sigma_p_inv * x.transpose();
        sigma_t = st / (static_cast<double>(n) * p);
        sigma_t = 0.5 * (sigma_t + sigma_t.transpose());

        Matrix sigma_t_inv;
        try {
            sigma_t_inv = inv_spd(sigma_t, "flip_flop sigma_t");
        } catch (const EstimationError&) {
            throw EstimationError("flip_flop: time factor singular at iteration " +
                                  std::to_string(iter));
        }
        Matrix sp = Matrix::Zero(p, p);
        for (const Matrix& x : xs) sp += x.transpose() * sigma_t_inv * x;
        sigma_p = sp / (static_cast<double>(n) * t);
        sigma_p = 0.5 * (sigma_p + sigma_p.transpose());

        Matrix cur_kron = kron(sigma_t, sigma_p);
        const double delta = (cur_kron - prev_kron).norm();
        prev_kron = std::move(cur_kron);
        res.iterations = iter;
        if (delta <= tol) {
            res.converged = true;
            break;
        }
    }

    // identifiability: move the sigma_t scale into sigma_p
    const double c = sigma_t(0, 0);
    if (!(c > 0.0))
        throw EstimationError("flip_flop: time factor degenerate after iteration " +
                              std::to_string(res.iterations));
    sigma_t /= c;
    sigma_p *= c;
    res.cov.sigma_t = std::move(sigma_t);
    res.cov.sigma_p = std::move(sigma_p);
    return res;
}

double kronecker_loglik(const Matrix& data_centered, int p, int t, const KroneckerCov& cov) {
    const int n = static_cast<int>(data_centered.rows());
    const double ld =
        static_cast<double>(p) * logdet_spd(cov.sigma_t, "kronecker_loglik sigma_t") +
        static_cast<double>(t) * logdet_spd(cov.sigma_p, "kronecker_loglik sigma_p");
    const Matrix st_inv = inv_spd(cov.sigma_t, "kronecker_loglik");
    const Matrix sp_inv = inv_spd(cov.sigma_p, "kronecker_loglik");
    double quad = 0.0;
    for (int j = 0; j < n; ++j) {
        Matrix x(t, p);
        for (int k = 0; k < t; ++k)
            for (int l = 0; l < p; ++l) x(k, l) = data_centered(j, k * p + l);
        quad += (st_inv * x * sp_inv).cwiseProduct(x).sum();
    }
    const double d = static_cast<double>(p) * t;
    return -0.5 * (n * d * kLog2Pi + n * ld + quad);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

std::pair<long, long> kronecker_param_count(int p, int t) {
    if (p < 1 || t < 1) throw ConfigError("kronecker_param_count: p,t must be >= 1");
    const long pt = static_cast<long>(p) * t;
    const long unstructured = pt * (pt + 1) / 2;
    const long kronecker =
        static_cast<long>(p) * (p + 1) / 2 + static_cast<long>(t) * (t + 1) / 2;
    return {unstructured, kronecker};
}

} // namespace longclass
