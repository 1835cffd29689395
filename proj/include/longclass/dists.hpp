#pragma once

#include <cstdint>

#include "longclass/linalg.hpp"
#include "longclass/rng.hpp"

namespace longclass {

/// Mean and covariance of a d-variate normal. For the lognormal sampler the
/// same pair is interpreted on the log scale, i.e. samples are exp(N(mean, cov))
/// componentwise.
struct MvnParams {
    Vector mean;
    Matrix cov;

    int dim() const { return static_cast<int>(mean.size()); }

    /// Checks symmetry (1e-10) and positive definiteness (Cholesky).
    void validate() const;
};

/// Componentwise box for the truncated-normal sampler; lower[k] < upper[k].
struct TruncationBounds {
    Vector lower;
    Vector upper;

    void validate(int d) const;
};

/// n i.i.d. rows from N(mean, cov) via the Cholesky factor of cov.
/// Deterministic given the seed.
Matrix sample_mvn(const MvnParams& params, int n, std::uint64_t seed);
Matrix sample_mvn(const MvnParams& params, int n, Rng64& rng);

/// n i.i.d. rows of exp(z), z ~ N(mean, cov); mean/cov are log-scale parameters.
Matrix sample_mv_lognormal(const MvnParams& params, int n, std::uint64_t seed);
Matrix sample_mv_lognormal(const MvnParams& params, int n, Rng64& rng);

/// Rejection sampler for N(mean, cov) conditioned on lower <= x <= upper.
/// Full MVN vectors are proposed and accepted iff every component lies in the
/// box; 1e6 consecutive rejections abort with an error.
Matrix sample_mv_truncnorm(const MvnParams& params, const TruncationBounds& bounds, int n,
                           std::uint64_t seed);
Matrix sample_mv_truncnorm(const MvnParams& params, const TruncationBounds& bounds, int n,
                           Rng64& rng);

} // namespace longclass
