#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "longclass/covariance.hpp"
#include "longclass/dataset.hpp"
#include "longclass/dists.hpp"
#include "longclass/eval.hpp"
#include "longclass/gee.hpp"
#include "longclass/lda.hpp"
#include "longclass/lsvm.hpp"
#include "longclass/robust.hpp"

namespace longclass {

enum class ClassifierKind { lda_pooled, lda_kp, lda_gee, lsvm };

const char* classifier_name(ClassifierKind k);
ClassifierKind classifier_from_name(const std::string& name);

enum class PriorMode { empirical, equal };

struct SvmConfig {
    static std::vector<double> default_grid(); // 13 log-spaced points 1e-3..1e3

    std::vector<double> c_grid = default_grid();
    int folds = 5;
    double tol = 1e-8;
    int max_iter = 100;
    double decision_threshold = 1.0;  // the quoted h(x) < 1 rule; 0 for sensitivity analysis
};

struct FlipFlopConfig {
    double tol = 1e-4;
    int max_iter = 200;
};

struct GeeConfig {
    double tol = 1e-8;
    int max_iter = 50;
};

struct TrimmingConfig {
    std::vector<TrimMethod> methods{TrimMethod::none};
    double keep_fraction = 0.9;
    int n_starts = 500;
};

enum class ScenarioDistribution { normal, lognormal, truncnorm };

const char* distribution_name(ScenarioDistribution d);
ScenarioDistribution distribution_from_name(const std::string& name);

/// One simulation scenario: distribution, class parameters, sample sizes,
/// trimming options, classifiers, replication and seeding.
struct ScenarioConfig {
    int p = 0;
    int t = 0;
    ScenarioDistribution distribution = ScenarioDistribution::normal;
    Vector mu0;
    Vector mu1;
    Matrix cov;                      // shared pt x pt covariance
    std::optional<TruncationBounds> bounds; // truncnorm only
    int n_train0 = 0, n_train1 = 0;
    int n_test0 = 1000, n_test1 = 1000;
    TrimmingConfig trimming;
    std::vector<ClassifierKind> classifiers;
    int replicates = 1;
    std::uint64_t seed = 0;
    PriorMode priors = PriorMode::empirical;
    SvmConfig svm;
    FlipFlopConfig flipflop;
    GeeConfig gee;
    int threads = 0; // 0 = hardware concurrency

    void validate() const;
};

/// One evaluated cell: replicate x classifier x trimming.
struct ReplicateResult {
    int replicate = 0;
    std::string classifier;
    std::string trimming;
    MetricSet metrics;
    bool ok = false;
    bool converged = true;
    long runtime_ms = 0;
    std::string error;
};

/// Mean/sd summary of one classifier x trimming x measure cell plus the
/// bookkeeping counts (failures, converged fits).
struct SummaryRow {
    std::string classifier;
    std::string trimming;
    std::string measure;
    double mean = 0.0;
    double sd = 0.0;
    int replicates_ok = 0;
    int failures = 0;
    int converged = 0;
};

struct ScenarioOutput {
    std::vector<ReplicateResult> rows;
    std::vector<SummaryRow> summary;
};

/// A classifier fitted on (possibly trimmed) training data.
struct FittedClassifier {
    ClassifierKind kind = ClassifierKind::lda_pooled;
    LdaModel lda;
    LsvmModel svm;
    StandardizeStats stats; // lsvm only
    double selected_c = 0.0;
    bool converged = true;
};

/// Fits one classifier on the training panel (already trimmed when trimming
/// is in play). The seed feeds only the SVM's cross-validation folds.
FittedClassifier fit_classifier(const LongitudinalDataset& train, ClassifierKind kind,
                                const ScenarioConfig& cfg, std::uint64_t seed);

std::vector<int> predict_labels(const FittedClassifier& model, const LongitudinalDataset& test);

/// Draws data, trims the training set only, fits every configured classifier
/// and evaluates it on the untrimmed test set, replicate by replicate
/// (replicates run concurrently; output order is deterministic).
ScenarioOutput run_scenario(const ScenarioConfig& cfg);

struct BootstrapCell {
    std::string classifier;
    std::string trimming;
    std::string measure;
    bool available = false; // false renders as NA
    BootstrapEstimate estimate;
    std::string error;
};

/// .632+ bootstrap table over classifier x trimming x measure for a reference
/// panel; cells whose pipeline cannot run (e.g. degenerate trimming) are NA.
std::vector<BootstrapCell> run_bootstrap(const LongitudinalDataset& ds,
                                         const std::vector<ClassifierKind>& classifiers,
                                         const TrimmingConfig& trimming,
                                         const std::vector<Measure>& measures, int b_resamples,
                                         double alpha, std::uint64_t seed,
                                         const ScenarioConfig& cfg);

/// CSV emission (fixed column order, 6 significant digits).
void emit_results_csv(const std::vector<ReplicateResult>& rows, const std::string& path);
void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);
void emit_roc_points_csv(const std::vector<ReplicateResult>& rows, const std::string& path);
void emit_bootstrap_csv(const std::vector<BootstrapCell>& cells, const std::string& path);

/// Serialized summary bytes (what emit_summary_csv writes); exposed so the
/// determinism property can be asserted without touching the filesystem.
std::string summary_to_string(const std::vector<SummaryRow>& rows);

} // namespace longclass
