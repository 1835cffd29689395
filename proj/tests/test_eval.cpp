#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <longclass/dists.hpp>
#include <longclass/errors.hpp>
#include <longclass/eval.hpp>
#include <longclass/harness.hpp>
#include <longclass/rng.hpp>

using namespace longclass;

TEST_CASE("confusion metrics") {
    SUBCASE("perfect prediction") {
        const std::vector<int> truth{0, 1, 0, 1}, pred{0, 1, 0, 1};
        const MetricSet m = confusion_metrics(truth, pred, 1);
        CHECK(m.accuracy == 1.0);
        CHECK(m.youden == 1.0);
    }
    SUBCASE("constant prediction on balanced labels") {
        const std::vector<int> truth{0, 1, 0, 1, 0, 1}, pred{1, 1, 1, 1, 1, 1};
        const MetricSet m = confusion_metrics(truth, pred, 1);
        CHECK(m.accuracy == 0.5);
        CHECK(m.youden == 0.0);
    }
    SUBCASE("hand-counted case") {
        // tp=3, fn=1, tn=2, fp=2
        const std::vector<int> truth{1, 1, 1, 1, 0, 0, 0, 0};
        const std::vector<int> pred{1, 1, 1, 0, 0, 0, 1, 1};
        const MetricSet m = confusion_metrics(truth, pred, 1);
        CHECK(m.tp == 3);
        CHECK(m.fn == 1);
        CHECK(m.tn == 2);
        CHECK(m.fp == 2);
        CHECK(m.sensitivity == doctest::Approx(0.75));
        CHECK(m.specificity == doctest::Approx(0.5));
        CHECK(m.youden == doctest::Approx(0.25));
        CHECK(m.accuracy == doctest::Approx(0.625));
    }
    SUBCASE("undefined ratios are flagged and zeroed") {
        const std::vector<int> truth{0, 0}, pred{0, 1};
        const MetricSet m = confusion_metrics(truth, pred, 1);
        CHECK(m.sensitivity == 0.0);
        CHECK(m.sensitivity_undefined);
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(confusion_metrics({0, 1}, {0}, 1), ConfigError);
    }
    SUBCASE("youden is invariant to flipping the predictions") {
        Rng64 rng(1u);
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<int> truth, pred, flipped;
            for (int i = 0; i < 30; ++i) {
                truth.push_back(int(rng.next_below(2)));
                pred.push_back(int(rng.next_below(2)));
                flipped.push_back(1 - pred.back());
            }
            const MetricSet a = confusion_metrics(truth, pred, 1);
            const MetricSet b = confusion_metrics(truth, flipped, 1);
            CHECK(a.youden >= 0.0);
            CHECK(a.youden <= 1.0);
            CHECK(a.youden == doctest::Approx(b.youden).epsilon(1e-12));
        }
    }
}

TEST_CASE("chi-square upper tail against frozen references") {
    CHECK(chi2_upper_tail(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi2_upper_tail(146.56735758076744, 120) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi2_upper_tail(460.2, 120) == doctest::Approx(2.556832126313e-41).epsilon(1e-6));
    CHECK(chi2_upper_tail(880.0, 816) == doctest::Approx(5.926026183525e-02).epsilon(1e-9));
    CHECK(chi2_upper_tail(-1.0, 5) == 1.0);
}

namespace {

Matrix gaussian_block(int n, int d, std::uint64_t seed) {
    Rng64 rng(seed);
    return Matrix::NullaryExpr(n, d,
                               [&](Eigen::Index, Eigen::Index) { return rng.next_gaussian(); });
}

} // namespace

TEST_CASE("mardia skewness") {
    SUBCASE("degrees of freedom follow d(d+1)(d+2)/6") {
        CHECK(mardia_skewness(gaussian_block(40, 8, 2u)).df == 120);
        CHECK(mardia_skewness(gaussian_block(60, 16, 3u)).df == 816);
    }
    SUBCASE("chi2 equals n*b/6 to machine precision") {
        const Matrix x = gaussian_block(50, 4, 4u);
        const MardiaResult r = mardia_skewness(x);
        CHECK(r.chi2 == doctest::Approx(50.0 * r.b1p / 6.0).epsilon(1e-15));
    }
    SUBCASE("exactly symmetric data has zero skewness") {
        const Matrix half = gaussian_block(25, 3, 5u);
        Matrix sym(50, 3);
        sym << half, -half; // every point paired with its reflection
        const MardiaResult r = mardia_skewness(sym);
        CHECK(std::abs(r.b1p) < 1e-12);
    }
    SUBCASE("affine invariance") {
        const Matrix x = gaussian_block(60, 4, 6u);
        const MardiaResult base = mardia_skewness(x);
        Rng64 rng(7u);
        for (int rep = 0; rep < 5; ++rep) {
            Matrix t = Matrix::NullaryExpr(4, 4, [&](Eigen::Index, Eigen::Index) {
                return rng.next_gaussian();
            });
            t += 3.0 * Matrix::Identity(4, 4);
            Vector c = Matrix::NullaryExpr(4, 1, [&](Eigen::Index, Eigen::Index) {
                return rng.next_gaussian();
            });
            const Matrix mapped = (x * t.transpose()).rowwise() + c.transpose();
            CHECK(mardia_skewness(mapped).b1p == doctest::Approx(base.b1p).epsilon(1e-8));
        }
    }
    SUBCASE("singular covariance is rejected") {
        Matrix x = gaussian_block(20, 3, 8u);
        x.col(2) = x.col(0); // exact collinearity
        CHECK_THROWS_AS(mardia_skewness(x), EstimationError);
    }
    SUBCASE("n must exceed d") {
        CHECK_THROWS_AS(mardia_skewness(gaussian_block(3, 3, 9u)), ConfigError);
    }
}

TEST_CASE("type-7 quantiles against frozen references") {
    const std::vector<double> v{3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0};
    CHECK(quantile_type7(v, 0.0) == doctest::Approx(1.0));
    CHECK(quantile_type7(v, 0.25) == doctest::Approx(1.75));
    CHECK(quantile_type7(v, 0.5) == doctest::Approx(3.5));
    CHECK(quantile_type7(v, 0.9) == doctest::Approx(6.9));
    CHECK(quantile_type7(v, 1.0) == doctest::Approx(9.0));
}

TEST_CASE("efron weight") {
    CHECK(efron_weight(0.8, 0.8, 0.5) == doctest::Approx(0.632)); // R = 0
    CHECK(efron_weight(0.8, 0.5, 0.5) == doctest::Approx(1.0));   // R = 1
    CHECK(efron_weight(0.8, 0.2, 0.5) == doctest::Approx(1.0));   // R clipped at 1
    CHECK(efron_weight(0.4, 0.5, 0.5) == doctest::Approx(0.632)); // oob above apparent
    CHECK(efron_weight(0.4, 0.3, 0.5) == doctest::Approx(0.632)); // apparent below gamma
}

TEST_CASE("no-information rates") {
    const std::vector<int> truth{1, 1, 1, 0}, pred{1, 1, 0, 0};
    // p_pos = 0.75, q_pos = 0.5
    CHECK(no_information_rate(Measure::accuracy, truth, pred, 1) ==
          doctest::Approx(0.75 * 0.5 + 0.25 * 0.5));
    CHECK(no_information_rate(Measure::youden, truth, pred, 1) == 0.0);
    CHECK(no_information_rate(Measure::sensitivity, truth, pred, 1) == doctest::Approx(0.5));
    CHECK(no_information_rate(Measure::specificity, truth, pred, 1) == doctest::Approx(0.5));
}

namespace {

LongitudinalDataset gaussian_panel(int n0, int n1, double separation, std::uint64_t seed) {
    Rng64 rng(seed);
    Matrix v(n0 + n1, 2);
    std::vector<int> labels;
    for (int j = 0; j < n0 + n1; ++j) {
        const int label = j < n0 ? 0 : 1;
        labels.push_back(label);
        const double shift = label == 0 ? separation : -separation;
        v(j, 0) = shift + rng.next_gaussian();
        v(j, 1) = shift + rng.next_gaussian();
    }
    return make_dataset(std::move(v), std::move(labels), 2, 1);
}

std::vector<int> constant_one_pipeline(const LongitudinalDataset&, const LongitudinalDataset& test) {
    return std::vector<int>(static_cast<std::size_t>(test.n()), 1);
}

} // namespace

TEST_CASE("bootstrap with a constant classifier on balanced data") {
    const LongitudinalDataset ds = gaussian_panel(20, 20, 0.0, 11u);
    const BootstrapEstimate est =
        bootstrap_632plus(ds, constant_one_pipeline, Measure::accuracy, 60, 0.05, 1u);
    CHECK(est.apparent == 0.5);
    CHECK(est.oob == doctest::Approx(0.5));
    CHECK(est.theta_632plus == doctest::Approx(0.5));
    CHECK(est.ci_lo <= 0.5);
    CHECK(est.ci_hi >= 0.5);
    CHECK(est.b_used == 60);
}

TEST_CASE("bootstrap rejects too few resamples") {
    const LongitudinalDataset ds = gaussian_panel(10, 10, 0.0, 12u);
    CHECK_THROWS_AS(bootstrap_632plus(ds, constant_one_pipeline, Measure::accuracy, 10, 0.05, 1u),
                    ConfigError);
}

namespace {

TrainPredictFn lda_pipeline() {
    return [](const LongitudinalDataset& train, const LongitudinalDataset& test) {
        ScenarioConfig cfg; // defaults; only classifier configs are read
        cfg.p = train.p;
        cfg.t = train.t;
        const FittedClassifier model =
            fit_classifier(train, ClassifierKind::lda_pooled, cfg, 1u);
        return predict_labels(model, test);
    };
}

} // namespace

TEST_CASE("bootstrap point estimate tracks an independent holdout oracle") {
    const LongitudinalDataset ds = gaussian_panel(30, 30, 0.8, 13u);
    const BootstrapEstimate est =
        bootstrap_632plus(ds, lda_pipeline(), Measure::accuracy, 200, 0.05, 2u);

    // Monte-Carlo oracle: the ds-trained model scored on 1e5 fresh draws
    const LongitudinalDataset holdout = gaussian_panel(50000, 50000, 0.8, 14u);
    const std::vector<int> pred = lda_pipeline()(ds, holdout);
    int correct = 0;
    for (int j = 0; j < holdout.n(); ++j)
        if (pred[j] == holdout.labels[j]) ++correct;
    const double oracle = double(correct) / holdout.n();

    CHECK(std::abs(est.theta_632plus - oracle) < 0.05);
    // the blend stays between its two ingredients
    CHECK(est.theta_632plus >= std::min(est.apparent, est.oob) - 1e-12);
    CHECK(est.theta_632plus <= std::max(est.apparent, est.oob) + 1e-12);
}

TEST_CASE("shrinking alpha widens the interval on a fixed resample set") {
    const LongitudinalDataset ds = gaussian_panel(25, 25, 0.5, 15u);
    const BootstrapEstimate wide =
        bootstrap_632plus(ds, lda_pipeline(), Measure::youden, 80, 0.05, 3u);
    const BootstrapEstimate narrow =
        bootstrap_632plus(ds, lda_pipeline(), Measure::youden, 80, 0.20, 3u);
    CHECK(wide.ci_lo <= narrow.ci_lo + 1e-12);
    CHECK(wide.ci_hi >= narrow.ci_hi - 1e-12);
    CHECK(wide.ci_lo <= wide.ci_hi);
}
