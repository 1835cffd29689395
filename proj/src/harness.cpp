#include "longclass/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "longclass/csv.hpp"
#include "longclass/errors.hpp"
#include "longclass/rng.hpp"

namespace longclass {

namespace {

constexpr int kPositiveClass = 1;

// substream tags for derive_seed
constexpr std::uint64_t kTagTrim = 11;
constexpr std::uint64_t kTagSvmCv = 12;

Vector class_mean(const Matrix& rows) { return rows.colwise().mean().transpose(); }

Matrix sample_cov(const Matrix& rows) {
    const Eigen::Index n = rows.rows();
    if (n < 2) throw EstimationError("sample covariance: need at least 2 rows");
    const Vector mean = class_mean(rows);
    const Matrix centered = rows.rowwise() - mean.transpose();
    Matrix s = (centered.transpose() * centered) / static_cast<double>(n - 1);
    return 0.5 * (s + s.transpose());
}

void apply_priors(GroupParams& gp, int n0, int n1, PriorMode mode) {
    if (mode == PriorMode::equal) {
        gp.prior0 = gp.prior1 = 0.5;
    } else {
        gp.prior0 = static_cast<double>(n0) / (n0 + n1);
        gp.prior1 = static_cast<double>(n1) / (n0 + n1);
    }
}

} // namespace

const char* classifier_name(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::lda_pooled: return "lda_pooled";
        case ClassifierKind::lda_kp: return "lda_kp";
        case ClassifierKind::lda_gee: return "lda_gee";
        case ClassifierKind::lsvm: return "lsvm";
    }
    return "lda_pooled";
}

ClassifierKind classifier_from_name(const std::string& name) {
    if (name == "lda_pooled") return ClassifierKind::lda_pooled;
    if (name == "lda_kp") return ClassifierKind::lda_kp;
    if (name == "lda_gee") return ClassifierKind::lda_gee;
    if (name == "lsvm") return ClassifierKind::lsvm;
    throw ConfigError("unknown classifier '" + name + "'");
}

const char* distribution_name(ScenarioDistribution d) {
    switch (d) {
        case ScenarioDistribution::normal: return "normal";
        case ScenarioDistribution::lognormal: return "lognormal";
        case ScenarioDistribution::truncnorm: return "truncnorm";
    }
    return "normal";
}

ScenarioDistribution distribution_from_name(const std::string& name) {
    if (name == "normal") return ScenarioDistribution::normal;
    if (name == "lognormal") return ScenarioDistribution::lognormal;
    if (name == "truncnorm") return ScenarioDistribution::truncnorm;
    throw ConfigError("unknown distribution '" + name + "'");
}

std::vector<double> SvmConfig::default_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 13; ++i) grid.push_back(std::pow(10.0, -3.0 + 0.5 * i));
    return grid;
}

void ScenarioConfig::validate() const {
    if (p < 1 || t < 1) throw ConfigError("scenario: p and t must be >= 1");
    const Eigen::Index d = static_cast<Eigen::Index>(p) * t;
    if (mu0.size() != d || mu1.size() != d)
        throw ConfigError("scenario: class means must have length p*t");
    if (cov.rows() != d || cov.cols() != d)
        throw ConfigError("scenario: covariance must be (p*t) x (p*t)");
    if (distribution == ScenarioDistribution::truncnorm && !bounds)
        throw ConfigError("scenario: truncnorm needs lower/upper bounds");
    if (n_train0 < 2 || n_train1 < 2) throw ConfigError("scenario: training sizes must be >= 2");
    if (n_test0 < 1 || n_test1 < 1) throw ConfigError("scenario: test sizes must be >= 1");
    if (replicates < 1) throw ConfigError("scenario: replicates must be >= 1");
    if (!(trimming.keep_fraction > 0.5) || !(trimming.keep_fraction <= 1.0))
        throw ConfigError("scenario: keep_fraction must be in (0.5, 1]");
    if (trimming.methods.empty()) throw ConfigError("scenario: no trimming methods configured");
    if (classifiers.empty()) throw ConfigError("scenario: no classifiers configured");
    if (svm.folds < 2) throw ConfigError("scenario: svm folds must be >= 2");
}

namespace {

/// Draws one class's panel rows from the configured distribution.
Matrix draw_class(const ScenarioConfig& cfg, const Vector& mu, int n, Rng64& rng) {
    MvnParams params{mu, cfg.cov};
    switch (cfg.distribution) {
        case ScenarioDistribution::normal: return sample_mvn(params, n, rng);
        case ScenarioDistribution::lognormal: return sample_mv_lognormal(params, n, rng);
        case ScenarioDistribution::truncnorm:
            return sample_mv_truncnorm(params, *cfg.bounds, n, rng);
    }
    throw ConfigError("scenario: unknown distribution");
}

LongitudinalDataset draw_dataset(const ScenarioConfig& cfg, int n0, int n1, Rng64& rng) {
    const Matrix rows0 = draw_class(cfg, cfg.mu0, n0, rng);
    const Matrix rows1 = draw_class(cfg, cfg.mu1, n1, rng);
    Matrix values(n0 + n1, cfg.p * cfg.t);
    values.topRows(n0) = rows0;
    values.bottomRows(n1) = rows1;
    std::vector<int> labels(static_cast<std::size_t>(n0), 0);
    labels.insert(labels.end(), static_cast<std::size_t>(n1), 1);
    return make_dataset(std::move(values), std::move(labels), cfg.p, cfg.t);
}

} // namespace

FittedClassifier fit_classifier(const LongitudinalDataset& train, ClassifierKind kind,
                                const ScenarioConfig& cfg, std::uint64_t seed) {
    train.validate(true);
    const int n0 = train.n0(), n1 = train.n1();
    FittedClassifier out;
    out.kind = kind;

    switch (kind) {
        case ClassifierKind::lda_pooled: {
            const Matrix rows0 = train.class_matrix(0), rows1 = train.class_matrix(1);
            GroupParams gp;
            gp.mu0 = class_mean(rows0);
            gp.mu1 = class_mean(rows1);
            gp.cov = pooled_covariance(sample_cov(rows0), n0, sample_cov(rows1), n1);
            apply_priors(gp, n0, n1, cfg.priors);
            out.lda = lda_train(gp);
            break;
        }
        case ClassifierKind::lda_kp: {
            const Matrix rows0 = train.class_matrix(0), rows1 = train.class_matrix(1);
            const Vector mu0 = class_mean(rows0), mu1 = class_mean(rows1);
            const Matrix centered0 = rows0.rowwise() - mu0.transpose();
            const Matrix centered1 = rows1.rowwise() - mu1.transpose();
            const FlipFlopResult f0 =
                flip_flop(centered0, train.p, train.t, cfg.flipflop.tol, cfg.flipflop.max_iter);
            const FlipFlopResult f1 =
                flip_flop(centered1, train.p, train.t, cfg.flipflop.tol, cfg.flipflop.max_iter);
            out.converged = f0.converged && f1.converged;
            GroupParams gp;
            gp.mu0 = mu0;
            gp.mu1 = mu1;
            gp.cov = pooled_kronecker(f0.cov, n0, f1.cov, n1);
            apply_priors(gp, n0, n1, cfg.priors);
            out.lda = lda_train(gp);
            break;
        }
        case ClassifierKind::lda_gee: {
            GeeDesign design{train.t, train.p};
            const GeeFit fit0 = fit_joint_gee(train.class_matrix(0), design, cfg.gee.tol,
                                              cfg.gee.max_iter);
            const GeeFit fit1 = fit_joint_gee(train.class_matrix(1), design, cfg.gee.tol,
                                              cfg.gee.max_iter);
            out.converged = fit0.converged && fit1.converged;
            GroupParams gp = gee_lda_params(fit0, n0, fit1, n1);
            apply_priors(gp, n0, n1, cfg.priors);
            out.lda = lda_train(gp);
            break;
        }
        case ClassifierKind::lsvm: {
            double c = cfg.svm.c_grid.empty() ? 1.0 : cfg.svm.c_grid.front();
            if (cfg.svm.c_grid.size() > 1) {
                c = select_c_grid(train, cfg.svm.c_grid, cfg.svm.folds,
                                  derive_seed(seed, kTagSvmCv), cfg.svm.tol, cfg.svm.max_iter,
                                  cfg.svm.decision_threshold);
            }
            auto [train_std, stats] = standardize(train);
            out.svm = fit_lsvm(train_std, c, cfg.svm.tol, cfg.svm.max_iter,
                               cfg.svm.decision_threshold);
            out.stats = stats;
            out.selected_c = c;
            out.converged = out.svm.converged;
            break;
        }
    }
    return out;
}

std::vector<int> predict_labels(const FittedClassifier& model, const LongitudinalDataset& test) {
    std::vector<int> pred(static_cast<std::size_t>(test.n()));
    if (model.kind == ClassifierKind::lsvm) {
        for (int j = 0; j < test.n(); ++j)
            pred[j] = lsvm_predict(model.svm, test.subject_matrix(j), model.stats);
    } else {
        for (int j = 0; j < test.n(); ++j)
            pred[j] = lda_predict(model.lda, test.values.row(j).transpose());
    }
    return pred;
}

namespace {

std::vector<ReplicateResult> run_replicate(const ScenarioConfig& cfg, int r) {
    Rng64 data_rng(cfg.seed + static_cast<std::uint64_t>(r));
    const LongitudinalDataset train = draw_dataset(cfg, cfg.n_train0, cfg.n_train1, data_rng);
    const LongitudinalDataset test = draw_dataset(cfg, cfg.n_test0, cfg.n_test1, data_rng);

    std::vector<ReplicateResult> rows;
    for (TrimMethod method : cfg.trimming.methods) {
        LongitudinalDataset trimmed;
        std::string trim_error;
        try {
            trimmed = trim_dataset(train, cfg.trimming.keep_fraction, method,
                                   derive_seed(cfg.seed, static_cast<std::uint64_t>(r), kTagTrim),
                                   cfg.trimming.n_starts);
        } catch (const std::exception& e) {
            trim_error = e.what();
        }
        for (ClassifierKind kind : cfg.classifiers) {
            ReplicateResult row;
            row.replicate = r;
            row.classifier = classifier_name(kind);
            row.trimming = trim_method_name(method);
            if (!trim_error.empty()) {
                row.error = trim_error;
                rows.push_back(std::move(row));
                continue;
            }
            const auto start = std::chrono::steady_clock::now();
            try {
                const FittedClassifier model = fit_classifier(
                    trimmed, kind, cfg, cfg.seed + static_cast<std::uint64_t>(r));
                const std::vector<int> pred = predict_labels(model, test);
                row.metrics = confusion_metrics(test.labels, pred, kPositiveClass);
                row.converged = model.converged;
                row.ok = true;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace

ScenarioOutput run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const int n_threads = cfg.threads > 0
                              ? cfg.threads
                              : std::max(1u, std::thread::hardware_concurrency());

    std::vector<std::vector<ReplicateResult>> per_replicate(
        static_cast<std::size_t>(cfg.replicates));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= cfg.replicates) break;
            per_replicate[static_cast<std::size_t>(r)] = run_replicate(cfg, r);
        }
    };
    if (n_threads <= 1 || cfg.replicates == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ScenarioOutput out;
    for (auto& rows : per_replicate)
        for (auto& row : rows) out.rows.push_back(std::move(row));

    // summary per classifier x trimming cell, in configured order
    for (TrimMethod method : cfg.trimming.methods) {
        for (ClassifierKind kind : cfg.classifiers) {
            const std::string cls = classifier_name(kind);
            const std::string trim = trim_method_name(method);
            std::vector<const ReplicateResult*> cell;
            int failures = 0, converged = 0;
            for (const auto& row : out.rows) {
                if (row.classifier != cls || row.trimming != trim) continue;
                if (!row.ok) {
                    ++failures;
                    continue;
                }
                if (row.converged) ++converged;
                cell.push_back(&row);
            }
            for (Measure m : {Measure::accuracy, Measure::youden, Measure::sensitivity,
                              Measure::specificity}) {
                SummaryRow s;
                s.classifier = cls;
                s.trimming = trim;
                s.measure = measure_name(m);
                s.replicates_ok = static_cast<int>(cell.size());
                s.failures = failures;
                s.converged = converged;
                if (!cell.empty()) {
                    double sum = 0.0;
                    for (const auto* row : cell) sum += metric_value(row->metrics, m);
                    s.mean = sum / static_cast<double>(cell.size());
                    double ss = 0.0;
                    for (const auto* row : cell) {
                        const double d = metric_value(row->metrics, m) - s.mean;
                        ss += d * d;
                    }
                    s.sd = cell.size() > 1
                               ? std::sqrt(ss / (static_cast<double>(cell.size()) - 1.0))
                               : 0.0;
                }
                out.summary.push_back(std::move(s));
            }
        }
    }
    return out;
}

std::vector<BootstrapCell> run_bootstrap(const LongitudinalDataset& ds,
                                         const std::vector<ClassifierKind>& classifiers,
                                         const TrimmingConfig& trimming,
                                         const std::vector<Measure>& measures, int b_resamples,
                                         double alpha, std::uint64_t seed,
                                         const ScenarioConfig& cfg) {
    ds.validate(true);
    std::vector<BootstrapCell> cells;
    for (TrimMethod method : trimming.methods) {
        for (ClassifierKind kind : classifiers) {
            const std::uint64_t pipe_seed =
                derive_seed(seed, static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(method));
            TrainPredictFn pipeline = [&, method, kind, pipe_seed](
                                          const LongitudinalDataset& train,
                                          const LongitudinalDataset& test) {
                const LongitudinalDataset trimmed =
                    trim_dataset(train, trimming.keep_fraction, method,
                                 derive_seed(pipe_seed, kTagTrim), trimming.n_starts);
                const FittedClassifier model = fit_classifier(trimmed, kind, cfg, pipe_seed);
                return predict_labels(model, test);
            };
            for (Measure m : measures) {
                BootstrapCell cell;
                cell.classifier = classifier_name(kind);
                cell.trimming = trim_method_name(method);
                cell.measure = measure_name(m);
                try {
                    // one shared resample stream keeps all cells paired
                    cell.estimate = bootstrap_632plus(ds, pipeline, m, b_resamples, alpha,
                                                      derive_seed(seed, 0xb00u), kPositiveClass);
                    cell.available = true;
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

void emit_results_csv(const std::vector<ReplicateResult>& rows, const std::string& path) {
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        std::vector<std::string> cells{
            std::to_string(r.replicate),
            r.classifier,
            r.trimming,
        };
        if (r.ok) {
            cells.push_back(format_g6(r.metrics.accuracy));
            cells.push_back(format_g6(r.metrics.youden));
            cells.push_back(format_g6(r.metrics.sensitivity));
            cells.push_back(format_g6(r.metrics.specificity));
        } else {
            for (int i = 0; i < 4; ++i) cells.push_back("NA");
        }
        cells.push_back(r.ok ? (r.converged ? "1" : "0") : "NA");
        cells.push_back(std::to_string(r.runtime_ms));
        cells.push_back(r.error);
        out.push_back(std::move(cells));
    }
    write_csv(path,
              {"replicate", "classifier", "trimming", "accuracy", "youden", "sensitivity",
               "specificity", "converged", "runtime_ms", "error"},
              out);
}

std::string summary_to_string(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "classifier,trimming,measure,mean,sd,mean_sd,replicates_ok,failures,converged\n";
    for (const auto& r : rows) {
        out << r.classifier << ',' << r.trimming << ',' << r.measure << ','
            << (r.replicates_ok > 0 ? format_g6(r.mean) : "NA") << ','
            << (r.replicates_ok > 0 ? format_g6(r.sd) : "NA") << ',';
        if (r.replicates_ok > 0) {
            out << format_g6(r.mean) << " (" << format_g6(r.sd) << ')';
        } else {
            out << "NA";
        }
        out << ',' << r.replicates_ok << ',' << r.failures << ',' << r.converged << '\n';
    }
    return out.str();
}

void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("emit_summary_csv: cannot write '" + path + "'");
    out << summary_to_string(rows);
}

void emit_roc_points_csv(const std::vector<ReplicateResult>& rows, const std::string& path) {
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        if (!r.ok) continue;
        out.push_back({std::to_string(r.replicate), r.classifier, r.trimming,
                       format_g6(1.0 - r.metrics.specificity), format_g6(r.metrics.sensitivity)});
    }
    write_csv(path, {"replicate", "classifier", "trimming", "fpr", "tpr"}, out);
}

void emit_bootstrap_csv(const std::vector<BootstrapCell>& cells, const std::string& path) {
    std::vector<std::vector<std::string>> out;
    for (const auto& c : cells) {
        std::vector<std::string> row{c.classifier, c.trimming, c.measure};
        if (c.available) {
            row.push_back(format_g6(c.estimate.theta_632plus));
            row.push_back(format_g6(c.estimate.ci_lo));
            row.push_back(format_g6(c.estimate.ci_hi));
            row.push_back(format_g6(c.estimate.theta_632plus) + " (" +
                          format_g6(c.estimate.ci_lo) + ", " + format_g6(c.estimate.ci_hi) + ")");
            row.push_back(format_g6(c.estimate.apparent));
            row.push_back(format_g6(c.estimate.oob));
            row.push_back(format_g6(c.estimate.weight_w));
            row.push_back(std::to_string(c.estimate.b_used));
        } else {
            for (int i = 0; i < 8; ++i) row.push_back("NA");
        }
        out.push_back(std::move(row));
    }
    write_csv(path,
              {"classifier", "trimming", "measure", "estimate", "ci_lo", "ci_hi", "formatted",
               "apparent", "oob", "weight_w", "b_used"},
              out);
}

} // namespace longclass
