#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "longclass/dataset.hpp"
#include "longclass/linalg.hpp"

namespace longclass {

/// Discrimination measures for one train/test evaluation. youden uses the
/// absolute form |sensitivity + specificity - 1|.
struct MetricSet {
    double accuracy = 0.0;
    double youden = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
    long tp = 0, fp = 0, tn = 0, fn = 0;
    bool sensitivity_undefined = false; // no positives in truth
    bool specificity_undefined = false; // no negatives in truth
};

enum class Measure { accuracy, youden, sensitivity, specificity };

const char* measure_name(Measure m);
Measure measure_from_name(const std::string& name);
double metric_value(const MetricSet& m, Measure which);

/// Confusion counts and derived measures; positive_class selects which label
/// counts as positive. Undefined ratios (0/0) yield 0 and set a flag.
MetricSet confusion_metrics(const std::vector<int>& truth, const std::vector<int>& pred,
                            int positive_class);

struct MardiaResult {
    double b1p = 0.0;
    double chi2 = 0.0;
    long df = 0;
    double pvalue = 1.0;
};

/// Mardia's multivariate skewness b_{1,p} with its chi-square test:
/// b1p = n^{-2} sum_{i,j} ((x_i - xbar)' S^{-1} (x_j - xbar))^3,
/// chi2 = n b1p / 6, df = d(d+1)(d+2)/6. S uses the divisor n.
MardiaResult mardia_skewness(const Matrix& data);

/// Upper tail of the chi-square distribution (regularized incomplete gamma).
double chi2_upper_tail(double x, double df);

/// A trainable classification pipeline: given train and test panels, returns
/// predicted labels for the test subjects. Throwing is allowed (degenerate
/// resamples are dropped by the bootstrap).
using TrainPredictFn =
    std::function<std::vector<int>(const LongitudinalDataset& train,
                                   const LongitudinalDataset& test)>;

struct BootstrapEstimate {
    double theta_632plus = 0.0;
    double apparent = 0.0;
    double oob = 0.0;
    double weight_w = 0.632;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    int b_used = 0;
};

/// .632+ bootstrap of a performance measure with a percentile-shift interval.
///
/// apparent trains and tests on the full panel. Each of the B resamples is
/// stratified within class with replacement (class sizes preserved); the
/// resample is scored on itself (theta^{boot,boot}) and on the excluded
/// subjects (OOB). The point estimate blends apparent and mean OOB with
/// w = 0.632 / (1 - 0.368 R), R = (apparent - oob) / (apparent - gamma)
/// clipped to [0,1], gamma the no-information rate. The interval applies the
/// alpha/2 and 1-alpha/2 quantiles (type 7) of w_b = theta^{boot,boot}_b - apparent
/// as [theta - xi_{1-a/2}, theta + xi_{a/2}]. Resamples whose pipeline throws
/// are dropped; b_used reports the survivors.
BootstrapEstimate bootstrap_632plus(const LongitudinalDataset& ds, const TrainPredictFn& pipeline,
                                    Measure measure, int b_resamples, double alpha,
                                    std::uint64_t seed, int positive_class = 1);

/// No-information rate of a measure given observed truth and the apparent
/// predictions: accuracy -> sum_c p_c q_c, youden -> 0, sensitivity ->
/// share predicted positive, specificity -> share predicted negative.
double no_information_rate(Measure measure, const std::vector<int>& truth,
                           const std::vector<int>& pred, int positive_class);

/// The .632+ mixing weight for a given apparent/OOB/no-information triple.
double efron_weight(double apparent, double oob, double gamma);

/// Type-7 (linear interpolation) quantile of a sample; q in [0,1].
double quantile_type7(std::vector<double> values, double q);

} // namespace longclass
