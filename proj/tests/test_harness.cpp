#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include <longclass/csv.hpp>
#include <longclass/errors.hpp>
#include <longclass/harness.hpp>

#include "scenario_params.hpp"

using namespace longclass;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("lc_test_") + name;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

ScenarioConfig scenario_a_config() {
    ScenarioConfig cfg;
    cfg.p = bench::kP;
    cfg.t = bench::kT;
    cfg.distribution = ScenarioDistribution::normal;
    cfg.mu0 = bench::scenario_a_mu0();
    cfg.mu1 = bench::scenario_a_mu1();
    cfg.cov = bench::scenario_a_cov();
    cfg.n_train0 = cfg.n_train1 = 93;
    cfg.n_test0 = cfg.n_test1 = 200;
    cfg.classifiers = {ClassifierKind::lda_pooled};
    cfg.replicates = 1;
    cfg.seed = 42;
    return cfg;
}

} // namespace

TEST_CASE("load_long_csv") {
    SUBCASE("well-formed two-subject panel") {
        const std::string path = temp_path("ok.csv");
        write_file(path,
                   "subject,group,time,score\n"
                   "a,0,1,1.5\n"
                   "a,0,2,2.5\n"
                   "b,1,1,-0.5\n"
                   "b,1,2,0.25\n");
        const LongitudinalDataset ds = load_long_csv(path);
        CHECK(ds.n() == 2);
        CHECK(ds.p == 1);
        CHECK(ds.t == 2);
        CHECK(ds.labels == std::vector<int>{0, 1});
        CHECK(ds.value(0, 0, 1) == 2.5);
        CHECK(ds.variable_names == std::vector<std::string>{"score"});
        std::remove(path.c_str());
    }
    SUBCASE("missing time is reported with the subject") {
        const std::string path = temp_path("missing.csv");
        write_file(path,
                   "subject,group,time,score\n"
                   "a,0,1,1.5\n"
                   "a,0,2,2.5\n"
                   "b,1,1,-0.5\n");
        CHECK_THROWS_WITH_AS(load_long_csv(path), doctest::Contains("subject 'b' missing time 2"),
                             DataError);
        std::remove(path.c_str());
    }
    SUBCASE("non-binary group") {
        const std::string path = temp_path("group.csv");
        write_file(path, "subject,group,time,score\na,2,1,1.5\n");
        CHECK_THROWS_WITH_AS(load_long_csv(path), doctest::Contains("group must be 0 or 1"),
                             DataError);
        std::remove(path.c_str());
    }
    SUBCASE("non-numeric cell names the location") {
        const std::string path = temp_path("cell.csv");
        write_file(path, "subject,group,time,score\na,0,1,abc\n");
        CHECK_THROWS_WITH_AS(load_long_csv(path), doctest::Contains("column 'score'"), DataError);
        std::remove(path.c_str());
    }
    SUBCASE("inconsistent group per subject") {
        const std::string path = temp_path("incons.csv");
        write_file(path,
                   "subject,group,time,score\n"
                   "a,0,1,1.0\n"
                   "a,1,2,1.0\n");
        CHECK_THROWS_WITH_AS(load_long_csv(path), doctest::Contains("inconsistent"), DataError);
        std::remove(path.c_str());
    }
}

TEST_CASE("panel save/load round trip holds at 6 significant digits") {
    Rng64 rng(5u);
    Matrix v = Matrix::NullaryExpr(6, 4, [&](Eigen::Index, Eigen::Index) {
        return rng.next_gaussian() * 100.0;
    });
    const LongitudinalDataset ds = make_dataset(v, {0, 0, 0, 1, 1, 1}, 2, 2);
    const std::string path = temp_path("roundtrip.csv");
    save_long_csv(ds, path);
    const LongitudinalDataset back = load_long_csv(path);
    CHECK(back.labels == ds.labels);
    for (int j = 0; j < ds.n(); ++j)
        for (int m = 0; m < ds.dim(); ++m) {
            const double rel = std::abs(back.values(j, m) - ds.values(j, m)) /
                               std::max(1e-30, std::abs(ds.values(j, m)));
            CHECK(rel < 1e-5); // 6 significant digits
        }
    std::remove(path.c_str());
}

TEST_CASE("result emission contracts") {
    SUBCASE("empty row list yields a header-only file") {
        const std::string path = temp_path("empty.csv");
        emit_results_csv({}, path);
        CHECK(read_file(path) ==
              "replicate,classifier,trimming,accuracy,youden,sensitivity,specificity,"
              "converged,runtime_ms,error\n");
        std::remove(path.c_str());
    }
    SUBCASE("roc file columns are fixed") {
        ReplicateResult r;
        r.replicate = 3;
        r.classifier = "lda_pooled";
        r.trimming = "none";
        r.ok = true;
        r.metrics.sensitivity = 0.75;
        r.metrics.specificity = 0.5;
        const std::string path = temp_path("roc.csv");
        emit_roc_points_csv({r}, path);
        CHECK(read_file(path) ==
              "replicate,classifier,trimming,fpr,tpr\n3,lda_pooled,none,0.5,0.75\n");
        std::remove(path.c_str());
    }
}

TEST_CASE("single-replicate smoke run") {
    const ScenarioConfig cfg = scenario_a_config();
    const ScenarioOutput out = run_scenario(cfg);
    REQUIRE(out.rows.size() == 1);
    CHECK(out.rows[0].ok);
    CHECK(out.rows[0].metrics.accuracy >= 0.0);
    CHECK(out.rows[0].metrics.accuracy <= 1.0);
    // trimming never touches the test set: confusion counts cover all test rows
    const auto& m = out.rows[0].metrics;
    CHECK(m.tp + m.fp + m.tn + m.fn == cfg.n_test0 + cfg.n_test1);
}

TEST_CASE("identical configs give byte-identical summaries, regardless of threads") {
    ScenarioConfig cfg = scenario_a_config();
    cfg.replicates = 6;
    cfg.classifiers = {ClassifierKind::lda_pooled, ClassifierKind::lda_kp};
    cfg.threads = 1;
    const ScenarioOutput a = run_scenario(cfg);
    cfg.threads = 2;
    const ScenarioOutput b = run_scenario(cfg);
    CHECK(summary_to_string(a.summary) == summary_to_string(b.summary));
}

TEST_CASE("no-op trimming equals explicit none given identical seeds") {
    ScenarioConfig cfg = scenario_a_config();
    cfg.replicates = 3;
    cfg.trimming.methods = {TrimMethod::none};
    const ScenarioOutput none_out = run_scenario(cfg);
    cfg.trimming.methods = {TrimMethod::mcd};
    cfg.trimming.keep_fraction = 1.0;
    const ScenarioOutput mcd_out = run_scenario(cfg);
    REQUIRE(none_out.rows.size() == mcd_out.rows.size());
    for (std::size_t i = 0; i < none_out.rows.size(); ++i) {
        CHECK(none_out.rows[i].metrics.accuracy == mcd_out.rows[i].metrics.accuracy);
        CHECK(none_out.rows[i].metrics.youden == mcd_out.rows[i].metrics.youden);
    }
}

TEST_CASE("summary means equal the mean of the emitted rows") {
    ScenarioConfig cfg = scenario_a_config();
    cfg.replicates = 5;
    const ScenarioOutput out = run_scenario(cfg);
    double sum = 0.0;
    int count = 0;
    for (const auto& row : out.rows) {
        if (!row.ok) continue;
        sum += row.metrics.accuracy;
        ++count;
    }
    for (const auto& s : out.summary) {
        if (s.measure == "accuracy") {
            CHECK(s.replicates_ok == count);
            CHECK(s.mean == doctest::Approx(sum / count).epsilon(1e-12));
        }
    }
}

TEST_CASE("every classifier fits and predicts in-process") {
    ScenarioConfig cfg = scenario_a_config();
    cfg.svm.c_grid = {1.0}; // single value: no CV inside the smoke test
    std::vector<int> labels(30, 0);
    labels.insert(labels.end(), 30, 1);
    const LongitudinalDataset train = make_dataset(
        sample_mvn(MvnParams{cfg.mu0, cfg.cov}, 60, 1u), std::move(labels), cfg.p, cfg.t);
    for (ClassifierKind kind : {ClassifierKind::lda_pooled, ClassifierKind::lda_kp,
                                ClassifierKind::lda_gee, ClassifierKind::lsvm}) {
        const FittedClassifier model = fit_classifier(train, kind, cfg, 7u);
        const std::vector<int> pred = predict_labels(model, train);
        CHECK(pred.size() == 60);
        for (int y : pred) CHECK((y == 0 || y == 1));
    }
}

TEST_CASE("bootstrap table marks degenerate trimming cells as NA and continues") {
    // class 0 carries a constant coordinate, so MCD trimming must fail and
    // the untrimmed cells must still be produced
    Rng64 rng(9u);
    Matrix v = Matrix::NullaryExpr(40, 4, [&](Eigen::Index, Eigen::Index) {
        return rng.next_gaussian();
    });
    for (int j = 0; j < 20; ++j) v(j, 2) = 1.0;
    std::vector<int> labels(20, 0);
    labels.insert(labels.end(), 20, 1);
    const LongitudinalDataset ds = make_dataset(v, labels, 2, 2);

    ScenarioConfig cfg;
    cfg.p = 2;
    cfg.t = 2;
    TrimmingConfig trimming;
    trimming.methods = {TrimMethod::none, TrimMethod::mcd};
    trimming.keep_fraction = 0.9;
    trimming.n_starts = 50;
    const std::vector<BootstrapCell> cells =
        run_bootstrap(ds, {ClassifierKind::lda_pooled}, trimming, {Measure::accuracy}, 50, 0.05,
                      1u, cfg);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].available);
    CHECK_FALSE(cells[1].available);
    const std::string path = temp_path("boot.csv");
    emit_bootstrap_csv(cells, path);
    CHECK(read_file(path).find("NA") != std::string::npos);
    std::remove(path.c_str());
}
