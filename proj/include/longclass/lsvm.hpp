#pragma once

#include <cstdint>
#include <vector>

#include "longclass/dataset.hpp"
#include "longclass/linalg.hpp"

namespace longclass {

/// Per-coordinate training mean and standard deviation, kept so that test
/// observations can be transformed with training statistics.
struct StandardizeStats {
    Vector mean;
    Vector sd; // sample sd, divisor n-1
};

/// Longitudinal linear SVM: Lagrange multipliers alpha over subjects and
/// temporal weights beta over time points (beta[0] fixed to 1), fitted by
/// alternating QPs. Class labels map 0 -> +1 and 1 -> -1 internally; a new
/// observation is assigned the negative class iff h(x) < decision_threshold.
struct LsvmModel {
    Vector alpha;       // n, in [0, C]
    Vector beta;        // t, beta[0] = 1
    Vector w;           // p
    double b = 0.0;
    double c_reg = 1.0;
    double decision_threshold = 1.0;
    bool converged = false;
    int iterations = 0;

    int t() const { return static_cast<int>(beta.size()); }
};

/// Labeled linear kernel blocks: entry (k1*t + k2) holds X_{k1} X_{k2}' with
/// X_k the n x p matrix of rows y_j x_jk. Data must be standardized.
std::vector<Matrix> build_gram_blocks(const LongitudinalDataset& data);

/// Alternating optimization per the longitudinal SVM:
///   1. beta initialized to all ones,
///   2. alpha-step: box/equality QP with matrix sum_k1,k2 beta_k1 beta_k2 G^{k1 k2},
///   3. beta-step: minimize 1/2 beta' M beta with M(k1,k2) = alpha' G^{k1 k2} alpha
///      subject to beta[0] = 1 (linear solve, ridge 1e-10 if singular),
/// looping until the Euclidean distance between consecutive alpha_m vectors
/// (alpha_m = (alpha, beta_1 alpha, ..., beta_{t-1} alpha)) drops below tol or
/// max_iter is reached; non-convergence is recorded, not fatal.
LsvmModel fit_lsvm(const LongitudinalDataset& data, double c_reg, double tol = 1e-8,
                   int max_iter = 100, double decision_threshold = 1.0);

/// Decision value h(x) = w' (X' beta) + b for a raw t x p observation, which
/// is standardized with the training statistics first.
double lsvm_decision_value(const LsvmModel& model, const Matrix& x_raw,
                           const StandardizeStats& stats);

/// Class label (0/1): negative SVM class (h < threshold) is class 1.
int lsvm_predict(const LsvmModel& model, const Matrix& x_raw, const StandardizeStats& stats);

/// Subjects whose alpha_m entries are positive at every time point.
std::vector<int> lsvm_support_vectors(const LsvmModel& model);

/// Per-coordinate standardization of the training panel (mean 0, variance 1);
/// throws on zero-variance coordinates.
std::pair<LongitudinalDataset, StandardizeStats> standardize(const LongitudinalDataset& train);

/// Applies training statistics to another panel.
LongitudinalDataset apply_standardization(const LongitudinalDataset& ds,
                                          const StandardizeStats& stats);

/// Stratified k-fold cross-validation over a C grid; returns the grid value
/// with maximal mean validation accuracy, ties resolved to the smallest C.
/// Folds whose training part lacks a class are skipped.
double select_c_grid(const LongitudinalDataset& data, const std::vector<double>& grid, int folds,
                     std::uint64_t seed, double tol = 1e-8, int max_iter = 100,
                     double decision_threshold = 1.0);

/// Internal class-label convention: +1 for class 0, -1 for class 1.
inline int svm_label(int class_label) { return class_label == 0 ? +1 : -1; }
inline int class_from_svm_label(int svm_y) { return svm_y > 0 ? 0 : 1; }

} // namespace longclass
