#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <longclass/dists.hpp>
#include <longclass/errors.hpp>

#include "scenario_params.hpp"

using namespace longclass;

namespace {

MvnParams identity_params(int d) {
    return MvnParams{Vector::Zero(d), Matrix::Identity(d, d)};
}

} // namespace

TEST_CASE("mvn identity case recovers mean and covariance") {
    const int n = 100000;
    const Matrix x = sample_mvn(identity_params(2), n, 12345u);
    const Vector mean = x.colwise().mean().transpose();
    CHECK(mean.lpNorm<Eigen::Infinity>() < 0.02);
    const Matrix centered = x.rowwise() - mean.transpose();
    const Matrix cov = (centered.transpose() * centered) / double(n - 1);
    CHECK((cov - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("mvn benchmark covariance entry is recovered") {
    MvnParams params{bench::scenario_a_mu0(), bench::scenario_a_cov()};
    const int n = 100000;
    const Matrix x = sample_mvn(params, n, 777u);
    const Vector mean = x.colwise().mean().transpose();
    const Matrix centered = x.rowwise() - mean.transpose();
    const Matrix cov = (centered.transpose() * centered) / double(n - 1);
    CHECK(std::abs(cov(0, 1) - 0.41) < 0.01);
}

TEST_CASE("mvn rejects an indefinite covariance naming the minor") {
    MvnParams params{Vector::Zero(2), Matrix(2, 2)};
    params.cov << 1.0, 2.0, 2.0, 1.0; // eigenvalues 3 and -1
    CHECK_THROWS_WITH_AS(sample_mvn(params, 5, 1u),
                         doctest::Contains("leading minor of order 2"), EstimationError);
}

TEST_CASE("lognormal rejects a degenerate covariance") {
    MvnParams params{Vector::Zero(1), Matrix::Zero(1, 1)};
    CHECK_THROWS_AS(sample_mv_lognormal(params, 5, 1u), EstimationError);
}

TEST_CASE("lognormal medians sit at exp(0) = 1") {
    const int n = 100000;
    Matrix x = sample_mv_lognormal(identity_params(2), n, 99u);
    for (int c = 0; c < 2; ++c) {
        std::vector<double> col(x.col(c).data(), x.col(c).data() + n);
        std::nth_element(col.begin(), col.begin() + n / 2, col.end());
        CHECK(std::abs(col[n / 2] - 1.0) < 0.05);
    }
}

TEST_CASE("lognormal mean matches the closed form exp(mu + sigma^2/2)") {
    const int n = 100000;
    const Matrix x = sample_mv_lognormal(identity_params(1), n, 4242u);
    const double expected = std::exp(0.5); // mu = 0, sigma^2 = 1
    CHECK(std::abs(x.col(0).mean() - expected) < 0.1);
}

TEST_CASE("truncated sampler keeps every draw inside the box") {
    MvnParams params{bench::scenario_a_mu0(), bench::scenario_a_cov()};
    TruncationBounds bounds{Vector::Zero(8), Vector::Constant(8, 4.0)};
    const Matrix x = sample_mv_truncnorm(params, bounds, 10000, 31u);
    CHECK(x.minCoeff() >= 0.0);
    CHECK(x.maxCoeff() <= 4.0);
}

TEST_CASE("half-normal mean via a one-sided box") {
    MvnParams params = identity_params(1);
    TruncationBounds bounds{Vector::Zero(1), Vector::Constant(1, 1e6)};
    const Matrix x = sample_mv_truncnorm(params, bounds, 100000, 5150u);
    const double expected = std::sqrt(2.0 / 3.14159265358979323846);
    CHECK(std::abs(x.col(0).mean() - expected) < 0.02);
}

TEST_CASE("truncation region too improbable raises") {
    MvnParams params = identity_params(1);
    TruncationBounds bounds{Vector::Constant(1, 50.0), Vector::Constant(1, 51.0)};
    CHECK_THROWS_WITH_AS(sample_mv_truncnorm(params, bounds, 1, 7u),
                         doctest::Contains("too improbable"), EstimationError);
}

TEST_CASE("identical seeds give bit-identical output") {
    MvnParams params{bench::scenario_a_mu0(), bench::scenario_a_cov()};
    TruncationBounds bounds{Vector::Zero(8), Vector::Constant(8, 4.0)};
    CHECK(sample_mvn(params, 50, 9u) == sample_mvn(params, 50, 9u));
    CHECK(sample_mv_lognormal(params, 50, 9u) == sample_mv_lognormal(params, 50, 9u));
    CHECK(sample_mv_truncnorm(params, bounds, 50, 9u) ==
          sample_mv_truncnorm(params, bounds, 50, 9u));
}

TEST_CASE("moment recovery within five Monte Carlo errors") {
    // d = 3 with correlated structure
    Matrix cov(3, 3);
    cov << 2.0, 0.6, 0.3,
           0.6, 1.5, 0.4,
           0.3, 0.4, 1.0;
    Vector mu(3);
    mu << -1.0, 0.5, 2.0;
    const int n = 100000;
    const Matrix x = sample_mvn(MvnParams{mu, cov}, n, 2024u);
    const Vector mean = x.colwise().mean().transpose();
    for (int k = 0; k < 3; ++k) {
        const double se = std::sqrt(cov(k, k) / n);
        CHECK(std::abs(mean(k) - mu(k)) < 5.0 * se);
    }
    const Matrix centered = x.rowwise() - mean.transpose();
    const Matrix sample_cov = (centered.transpose() * centered) / double(n - 1);
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
            const double se =
                std::sqrt((cov(k, k) * cov(l, l) + cov(k, l) * cov(k, l)) / n);
            CHECK(std::abs(sample_cov(k, l) - cov(k, l)) < 5.0 * se);
        }
}
