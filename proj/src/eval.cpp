#include "longclass/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "longclass/errors.hpp"
#include "longclass/rng.hpp"

namespace longclass {

const char* measure_name(Measure m) {
    switch (m) {
        case Measure::accuracy: return "accuracy";
        case Measure::youden: return "youden";
        case Measure::sensitivity: return "sensitivity";
        case Measure::specificity: return "specificity";
    }
    return "accuracy";
}

Measure measure_from_name(const std::string& name) {
    if (name == "accuracy") return Measure::accuracy;
    if (name == "youden") return Measure::youden;
    if (name == "sensitivity") return Measure::sensitivity;
    if (name == "specificity") return Measure::specificity;
    throw ConfigError("unknown measure '" + name + "'");
}

double metric_value(const MetricSet& m, Measure which) {
    switch (which) {
        case Measure::accuracy: return m.accuracy;
        case Measure::youden: return m.youden;
        case Measure::sensitivity: return m.sensitivity;
        case Measure::specificity: return m.specificity;
    }
    return m.accuracy;
}

MetricSet confusion_metrics(const std::vector<int>& truth, const std::vector<int>& pred,
                            int positive_class) {
    if (truth.size() != pred.size() || truth.empty())
        throw ConfigError("confusion_metrics: label vectors must have equal nonzero length");
    MetricSet m;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool pos_truth = truth[i] == positive_class;
        const bool pos_pred = pred[i] == positive_class;
        if (pos_truth && pos_pred) ++m.tp;
        else if (!pos_truth && pos_pred) ++m.fp;
        else if (!pos_truth && !pos_pred) ++m.tn;
        else ++m.fn;
    }
    const double total = static_cast<double>(truth.size());
    m.accuracy = (m.tp + m.tn) / total;
    if (m.tp + m.fn > 0) {
        m.sensitivity = static_cast<double>(m.tp) / (m.tp + m.fn);
    } else {
        m.sensitivity_undefined = true;
    }
    if (m.tn + m.fp > 0) {
        m.specificity = static_cast<double>(m.tn) / (m.tn + m.fp);
    } else {
        m.specificity_undefined = true;
    }
    m.youden = std::abs(m.sensitivity + m.specificity - 1.0);
    return m;
}

namespace {

/// Regularized lower incomplete gamma P(a, x) by series (x < a+1) or
/// continued fraction (otherwise); the classic two-branch evaluation.
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    // Lentz continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + a * std::log(x) - gln) * h;
    return 1.0 - q;
}

} // namespace

double chi2_upper_tail(double x, double df) {
    if (x <= 0.0) return 1.0;
    return 1.0 - gamma_p(0.5 * df, 0.5 * x);
}

MardiaResult mardia_skewness(const Matrix& data) {
    const Eigen::Index n = data.rows(), d = data.cols();
    if (n <= d) throw ConfigError("mardia_skewness: need n > d");
    const Vector mean = data.colwise().mean().transpose();
    Matrix centered = data.rowwise() - mean.transpose();
    Matrix s = (centered.transpose() * centered) / static_cast<double>(n); // divisor n
    s = 0.5 * (s + s.transpose());
    Matrix s_inv;
    try {
        s_inv = inv_spd(s, "mardia_skewness");
    } catch (const EstimationError&) {
        throw EstimationError("mardia_skewness: singular sample covariance");
    }
    const Matrix g = centered * s_inv * centered.transpose(); // g_ij
    const double b1p = g.array().cube().sum() / (static_cast<double>(n) * n);
    MardiaResult res;
    res.b1p = b1p;
    res.chi2 = static_cast<double>(n) * b1p / 6.0;
    res.df = static_cast<long>(d) * (d + 1) * (d + 2) / 6;
    res.pvalue = chi2_upper_tail(res.chi2, static_cast<double>(res.df));
    return res;
}

double no_information_rate(Measure measure, const std::vector<int>& truth,
                           const std::vector<int>& pred, int positive_class) {
    const double n = static_cast<double>(truth.size());
    double p_pos = 0.0, q_pos = 0.0;
    for (int y : truth) p_pos += y == positive_class ? 1.0 : 0.0;
    for (int y : pred) q_pos += y == positive_class ? 1.0 : 0.0;
    p_pos /= n;
    q_pos /= n;
    switch (measure) {
        case Measure::accuracy: return p_pos * q_pos + (1.0 - p_pos) * (1.0 - q_pos);
        case Measure::youden: return 0.0;
        case Measure::sensitivity: return q_pos;
        case Measure::specificity: return 1.0 - q_pos;
    }
    return 0.0;
}

double efron_weight(double apparent, double oob, double gamma) {
    double r = 0.0;
    const double denom = apparent - gamma;
    if (denom > 0.0 && apparent > oob) r = (apparent - oob) / denom;
    r = std::clamp(r, 0.0, 1.0);
    return 0.632 / (1.0 - 0.368 * r);
}

double quantile_type7(std::vector<double> values, double q) {
    if (values.empty()) throw ConfigError("quantile_type7: empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const std::size_t i = static_cast<std::size_t>(std::floor(h));
    if (i + 1 >= values.size()) return values.back();
    return values[i] + (h - static_cast<double>(i)) * (values[i + 1] - values[i]);
}

BootstrapEstimate bootstrap_632plus(const LongitudinalDataset& ds, const TrainPredictFn& pipeline,
                                    Measure measure, int b_resamples, double alpha,
                                    std::uint64_t seed, int positive_class) {
    if (b_resamples < 50) throw ConfigError("bootstrap_632plus: need B >= 50");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("bootstrap_632plus: alpha in (0,1)");
    ds.validate(true);
    const int n = ds.n();

    std::vector<int> class0, class1;
    for (int j = 0; j < n; ++j) (ds.labels[j] == 0 ? class0 : class1).push_back(j);

    // apparent performance: train and test on the original panel
    const std::vector<int> apparent_pred = pipeline(ds, ds);
    const MetricSet apparent_metrics = confusion_metrics(ds.labels, apparent_pred, positive_class);
    const double apparent = metric_value(apparent_metrics, measure);
    const double gamma = no_information_rate(measure, ds.labels, apparent_pred, positive_class);

    std::vector<double> oob_values;
    std::vector<double> wb_values;
    for (int b = 0; b < b_resamples; ++b) {
        Rng64 rng(derive_seed(seed, static_cast<std::uint64_t>(b), 0x632));
        std::vector<int> sampled;
        std::vector<char> in_bag;
        bool ok = false;
        for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
            sampled.clear();
            in_bag.assign(n, 0);
            for (int j = 0; j < static_cast<int>(class0.size()); ++j) {
                const int pick = class0[rng.next_below(class0.size())];
                sampled.push_back(pick);
                in_bag[pick] = 1;
            }
            for (int j = 0; j < static_cast<int>(class1.size()); ++j) {
                const int pick = class1[rng.next_below(class1.size())];
                sampled.push_back(pick);
                in_bag[pick] = 1;
            }
            std::vector<int> oob_rows;
            for (int j = 0; j < n; ++j)
                if (!in_bag[j]) oob_rows.push_back(j);
            // degenerate resample: nothing (or only one class) left out-of-bag
            int oob0 = 0, oob1 = 0;
            for (int j : oob_rows) (ds.labels[j] == 0 ? oob0 : oob1) += 1;
            ok = oob0 > 0 && oob1 > 0;
        }
        if (!ok) continue;

        std::vector<int> oob_rows;
        for (int j = 0; j < n; ++j)
            if (!in_bag[j]) oob_rows.push_back(j);
        const LongitudinalDataset boot = ds.subset(sampled);
        const LongitudinalDataset oob_ds = ds.subset(oob_rows);
        try {
            const std::vector<int> boot_pred = pipeline(boot, boot);
            const std::vector<int> oob_pred = pipeline(boot, oob_ds);
            const double theta_bb =
                metric_value(confusion_metrics(boot.labels, boot_pred, positive_class), measure);
            const double theta_oob =
                metric_value(confusion_metrics(oob_ds.labels, oob_pred, positive_class), measure);
            oob_values.push_back(theta_oob);
            wb_values.push_back(theta_bb - apparent);
        } catch (const std::exception&) {
            // failed resample (degenerate trimming etc.): dropped
        }
    }
    if (oob_values.empty()) throw EstimationError("bootstrap_632plus: all resamples failed");

    BootstrapEstimate est;
    est.b_used = static_cast<int>(oob_values.size());
    est.apparent = apparent;
    est.oob = 0.0;
    for (double v : oob_values) est.oob += v;
    est.oob /= static_cast<double>(oob_values.size());
    est.weight_w = efron_weight(apparent, est.oob, gamma);
    est.theta_632plus = (1.0 - est.weight_w) * apparent + est.weight_w * est.oob;

    const double xi_hi = quantile_type7(wb_values, 1.0 - alpha / 2.0);
    const double xi_lo = quantile_type7(wb_values, alpha / 2.0);
    est.ci_lo = est.theta_632plus - xi_hi;
    est.ci_hi = est.theta_632plus + xi_lo;
    if (est.ci_lo > est.ci_hi) std::swap(est.ci_lo, est.ci_hi);
    return est;
}

} // namespace longclass
