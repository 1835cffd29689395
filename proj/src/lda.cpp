#include "longclass/lda.hpp"

#include <cmath>
#include <string>

#include "longclass/errors.hpp"

namespace longclass {

namespace {

/// Smallest eigenvalue, reported when a covariance cannot be factorized.
double min_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Vector solve_direction(const Matrix& cov, const Vector& diff) {
    try {
        return solve_spd(cov, diff, "lda_train");
    } catch (const EstimationError&) {
        throw EstimationError("lda_train: singular covariance (smallest eigenvalue " +
                              std::to_string(min_eigenvalue(cov)) + ")");
    }
}

} // namespace

LdaModel lda_train(const GroupParams& params) {
    const Vector diff = params.mu0 - params.mu1;
    LdaModel model;
    model.midpoint = 0.5 * (params.mu0 + params.mu1);
    model.threshold = std::log(params.prior1 / params.prior0);
    model.degenerate = diff.lpNorm<Eigen::Infinity>() == 0.0;

    if (std::holds_alternative<Matrix>(params.cov)) {
        model.direction = solve_direction(std::get<Matrix>(params.cov), diff);
    } else {
        const KroneckerCov& kc = std::get<KroneckerCov>(params.cov);
        const int t = kc.t(), p = kc.p();
        if (static_cast<Eigen::Index>(t) * p != diff.size())
            throw ConfigError("lda_train: Kronecker factors do not match mean dimension");
        // (Sigma_t kron Sigma_p)^{-1} diff, via diff reshaped to t x p
        Matrix m(t, p);
        for (int k = 0; k < t; ++k)
            for (int l = 0; l < p; ++l) m(k, l) = diff(static_cast<Eigen::Index>(k) * p + l);
        Matrix solved;
        try {
            solved = solve_spd(kc.sigma_t, m, "lda_train sigma_t");
            solved = solve_spd(kc.sigma_p, Matrix(solved.transpose()), "lda_train sigma_p")
                         .transpose();
        } catch (const EstimationError&) {
            throw EstimationError(
                "lda_train: singular Kronecker factor (smallest eigenvalues " +
                std::to_string(min_eigenvalue(kc.sigma_t)) + ", " +
                std::to_string(min_eigenvalue(kc.sigma_p)) + ")");
        }
        model.direction = Vector(static_cast<Eigen::Index>(t) * p);
        for (int k = 0; k < t; ++k)
            for (int l = 0; l < p; ++l)
                model.direction(static_cast<Eigen::Index>(k) * p + l) = solved(k, l);
    }
    return model;
}

int lda_predict(const LdaModel& model, const Vector& x) {
    if (x.size() != model.direction.size())
        throw ConfigError("lda_predict: dimension mismatch");
    return model.decision_statistic(x) > model.threshold ? 0 : 1;
}

} // namespace longclass
