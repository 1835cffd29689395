#include "longclass/dists.hpp"

#include <string>

#include "longclass/errors.hpp"

namespace longclass {

namespace {
constexpr long kMaxConsecutiveRejections = 1000000;
}

void MvnParams::validate() const {
    if (mean.size() < 1) throw ConfigError("MvnParams: empty mean");
    if (cov.rows() != mean.size() || cov.cols() != mean.size())
        throw ConfigError("MvnParams: cov dimension does not match mean");
    if (!is_symmetric(cov, 1e-10)) throw EstimationError("MvnParams: cov not symmetric");
    cholesky_lower(cov, "MvnParams");
}

void TruncationBounds::validate(int d) const {
    if (lower.size() != d || upper.size() != d)
        throw ConfigError("TruncationBounds: dimension mismatch");
    for (int k = 0; k < d; ++k)
        if (!(lower(k) < upper(k)))
            throw ConfigError("TruncationBounds: lower[" + std::to_string(k) +
                              "] must be < upper[" + std::to_string(k) + "]");
}

Matrix sample_mvn(const MvnParams& params, int n, Rng64& rng) {
    if (n < 1) throw ConfigError("sample_mvn: n must be >= 1");
    params.validate();
    const int d = params.dim();
    const Matrix l = cholesky_lower(params.cov, "sample_mvn");
    Matrix out(n, d);
    Vector z(d);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) z(k) = rng.next_gaussian();
        out.row(i) = (params.mean + l * z).transpose();
    }
    return out;
}

Matrix sample_mvn(const MvnParams& params, int n, std::uint64_t seed) {
    Rng64 rng(seed);
    return sample_mvn(params, n, rng);
}

Matrix sample_mv_lognormal(const MvnParams& params, int n, Rng64& rng) {
    Matrix out = sample_mvn(params, n, rng);
    return out.array().exp().matrix();
}

Matrix sample_mv_lognormal(const MvnParams& params, int n, std::uint64_t seed) {
    Rng64 rng(seed);
    return sample_mv_lognormal(params, n, rng);
}

Matrix sample_mv_truncnorm(const MvnParams& params, const TruncationBounds& bounds, int n,
                           Rng64& rng) {
    if (n < 1) throw ConfigError("sample_mv_truncnorm: n must be >= 1");
    params.validate();
    const int d = params.dim();
    bounds.validate(d);
    const Matrix l = cholesky_lower(params.cov, "sample_mv_truncnorm");
    Matrix out(n, d);
    Vector z(d), x(d);
    for (int i = 0; i < n; ++i) {
        long rejected = 0;
        for (;;) {
            for (int k = 0; k < d; ++k) z(k) = rng.next_gaussian();
            x = params.mean + l * z;
            bool inside = true;
            for (int k = 0; k < d; ++k) {
                if (x(k) < bounds.lower(k) || x(k) > bounds.upper(k)) {
                    inside = false;
                    break;
                }
            }
            if (inside) break;
            if (++rejected >= kMaxConsecutiveRejections)
                throw EstimationError("sample_mv_truncnorm: truncation region too improbable");
        }
        out.row(i) = x.transpose();
    }
    return out;
}

Matrix sample_mv_truncnorm(const MvnParams& params, const TruncationBounds& bounds, int n,
                           std::uint64_t seed) {
    Rng64 rng(seed);
    return sample_mv_truncnorm(params, bounds, n, rng);
}

} // namespace longclass
