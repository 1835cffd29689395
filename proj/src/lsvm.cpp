#include "longclass/lsvm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "longclass/errors.hpp"
#include "longclass/qp.hpp"
#include "longclass/rng.hpp"

namespace longclass {

namespace {

constexpr double kBetaRidge = 1e-10;
constexpr double kEqualitySlack = 1e-8;

Vector svm_labels(const LongitudinalDataset& data) {
    Vector y(data.n());
    for (int j = 0; j < data.n(); ++j) y(j) = svm_label(data.labels[j]);
    return y;
}

/// beta-step: minimize 1/2 beta' M beta with beta[0] = 1. The supplement's
/// second constraint (sum_j alpha_j y_j)(sum_k beta_k) = 0 is vacuous once the
/// alpha-step satisfied its equality constraint; that is asserted by the caller.
Vector beta_step(const Matrix& m) {
    const Eigen::Index t = m.rows();
    Vector beta = Vector::Zero(t);
    beta(0) = 1.0;
    if (t == 1) return beta;
    const Matrix mff = m.block(1, 1, t - 1, t - 1);
    const Vector mf0 = m.block(1, 0, t - 1, 1);
    Eigen::LDLT<Matrix> ldlt(mff);
    Vector sol;
    if (ldlt.info() == Eigen::Success) {
        sol = ldlt.solve(-mf0);
    }
    if (ldlt.info() != Eigen::Success || !sol.allFinite()) {
        Matrix ridged = mff + kBetaRidge * Matrix::Identity(t - 1, t - 1);
        sol = Eigen::LDLT<Matrix>(ridged).solve(-mf0);
    }
    beta.tail(t - 1) = sol;
    return beta;
}

Vector alpha_m_vector(const Vector& alpha, const Vector& beta) {
    const Eigen::Index n = alpha.size(), t = beta.size();
    Vector am(n * t);
    for (Eigen::Index k = 0; k < t; ++k) am.segment(k * n, n) = beta(k) * alpha;
    return am;
}

} // namespace

std::vector<Matrix> build_gram_blocks(const LongitudinalDataset& data) {
    data.validate(false);
    const int n = data.n(), p = data.p, t = data.t;
    const Vector y = svm_labels(data);

    std::vector<Matrix> xk(t); // X_k = rows y_j * x_jk
    for (int k = 0; k < t; ++k) {
        Matrix x(n, p);
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < p; ++l) x(j, l) = y(j) * data.values(j, k * p + l);
        xk[k] = std::move(x);
    }
    std::vector<Matrix> blocks(static_cast<std::size_t>(t) * t);
    for (int k1 = 0; k1 < t; ++k1)
        for (int k2 = 0; k2 < t; ++k2) {
            if (k2 < k1) {
                blocks[static_cast<std::size_t>(k1) * t + k2] =
                    blocks[static_cast<std::size_t>(k2) * t + k1].transpose();
            } else {
                blocks[static_cast<std::size_t>(k1) * t + k2] = xk[k1] * xk[k2].transpose();
            }
        }
    return blocks;
}

LsvmModel fit_lsvm(const LongitudinalDataset& data, double c_reg, double tol, int max_iter,
                   double decision_threshold) {
    data.validate(true);
    if (!(c_reg > 0.0)) throw ConfigError("fit_lsvm: C must be positive");
    const int n = data.n(), p = data.p, t = data.t;
    const Vector y = svm_labels(data);
    const std::vector<Matrix> blocks = build_gram_blocks(data);

    LsvmModel model;
    model.c_reg = c_reg;
    model.decision_threshold = decision_threshold;
    model.beta = Vector::Ones(t);
    model.alpha = Vector::Zero(n);

    QpProblem qp;
    qp.linear = Vector::Constant(n, -1.0);
    qp.lo = Vector::Zero(n);
    qp.hi = Vector::Constant(n, c_reg);
    qp.eq_coeff = y;
    qp.eq_target = 0.0;

    Vector am_prev = alpha_m_vector(model.alpha, model.beta);
    for (int iter = 1; iter <= max_iter; ++iter) {
        model.iterations = iter;

        // alpha-step at fixed beta
        Matrix q = Matrix::Zero(n, n);
        for (int k1 = 0; k1 < t; ++k1)
            for (int k2 = 0; k2 < t; ++k2)
                q.noalias() +=
                    model.beta(k1) * model.beta(k2) * blocks[static_cast<std::size_t>(k1) * t + k2];
        qp.q = 0.5 * (q + q.transpose());
        model.alpha = solve_qp(qp, tol, model.alpha);
        if (std::abs(y.dot(model.alpha)) > kEqualitySlack)
            throw QpError("fit_lsvm: alpha-step violated its equality constraint");

        // beta-step at fixed alpha
        Matrix m(t, t);
        for (int k1 = 0; k1 < t; ++k1)
            for (int k2 = 0; k2 < t; ++k2)
                m(k1, k2) =
                    model.alpha.dot(blocks[static_cast<std::size_t>(k1) * t + k2] * model.alpha);
        model.beta = beta_step(0.5 * (m + m.transpose()));

        const Vector am = alpha_m_vector(model.alpha, model.beta);
        const double dist = (am - am_prev).norm();
        am_prev = am;
        if (dist < tol) {
            model.converged = true;
            break;
        }
    }

    // weight vector and intercept from the final iterate
    model.w = Vector::Zero(p);
    for (int j = 0; j < n; ++j) {
        Vector combined = Vector::Zero(p);
        for (int k = 0; k < t; ++k)
            combined += model.beta(k) * data.values.row(j).segment(k * p, p).transpose();
        model.w += y(j) * model.alpha(j) * combined;
    }
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double f = 0.0;
        for (int k = 0; k < t; ++k)
            f += model.beta(k) * model.w.dot(data.values.row(j).segment(k * p, p));
        acc += f - y(j);
    }
    model.b = acc / n;
    return model;
}

double lsvm_decision_value(const LsvmModel& model, const Matrix& x_raw,
                           const StandardizeStats& stats) {
    const int t = model.t();
    const int p = static_cast<int>(model.w.size());
    if (x_raw.rows() != t || x_raw.cols() != p)
        throw ConfigError("lsvm_decision_value: observation must be t x p");
    double f = 0.0;
    for (int k = 0; k < t; ++k)
        for (int l = 0; l < p; ++l) {
            const double z = (x_raw(k, l) - stats.mean(static_cast<Eigen::Index>(k) * p + l)) /
                             stats.sd(static_cast<Eigen::Index>(k) * p + l);
            f += model.beta(k) * model.w(l) * z;
        }
    return f + model.b;
}

int lsvm_predict(const LsvmModel& model, const Matrix& x_raw, const StandardizeStats& stats) {
    const double h = lsvm_decision_value(model, x_raw, stats);
    return class_from_svm_label(h < model.decision_threshold ? -1 : +1);
}

std::vector<int> lsvm_support_vectors(const LsvmModel& model) {
    std::vector<int> sv;
    for (Eigen::Index j = 0; j < model.alpha.size(); ++j) {
        bool all_positive = true;
        for (int k = 0; k < model.t(); ++k)
            if (!(model.beta(k) * model.alpha(j) > 0.0)) {
                all_positive = false;
                break;
            }
        if (all_positive) sv.push_back(static_cast<int>(j));
    }
    return sv;
}

std::pair<LongitudinalDataset, StandardizeStats> standardize(const LongitudinalDataset& train) {
    train.validate(false);
    const int n = train.n();
    if (n < 2) throw ConfigError("standardize: need at least 2 subjects");
    StandardizeStats stats;
    stats.mean = train.values.colwise().mean().transpose();
    stats.sd = Vector(train.dim());
    for (int m = 0; m < train.dim(); ++m) {
        const double ss = (train.values.col(m).array() - stats.mean(m)).square().sum();
        const double var = ss / (n - 1);
        if (!(var > 0.0))
            throw EstimationError("standardize: zero variance in coordinate " + std::to_string(m));
        stats.sd(m) = std::sqrt(var);
    }
    return {apply_standardization(train, stats), stats};
}

LongitudinalDataset apply_standardization(const LongitudinalDataset& ds,
                                          const StandardizeStats& stats) {
    LongitudinalDataset out = ds;
    out.values = (ds.values.rowwise() - stats.mean.transpose()).array().rowwise() /
                 stats.sd.transpose().array();
    return out;
}

double select_c_grid(const LongitudinalDataset& data, const std::vector<double>& grid, int folds,
                     std::uint64_t seed, double tol, int max_iter, double decision_threshold) {
    if (grid.empty()) throw ConfigError("select_c_grid: empty grid");
    for (double c : grid)
        if (!(c > 0.0)) throw ConfigError("select_c_grid: grid values must be positive");
    if (folds < 2) throw ConfigError("select_c_grid: need at least 2 folds");
    data.validate(true);

    std::vector<double> cs = grid;
    std::sort(cs.begin(), cs.end()); // ascending, so ties keep the smallest C

    // stratified fold assignment: shuffle within class, deal round-robin
    std::vector<int> fold_of(data.n(), -1);
    Rng64 rng(seed);
    for (int label = 0; label <= 1; ++label) {
        std::vector<int> rows;
        for (int j = 0; j < data.n(); ++j)
            if (data.labels[j] == label) rows.push_back(j);
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            const std::size_t j = i + rng.next_below(rows.size() - i);
            std::swap(rows[i], rows[j]);
        }
        for (std::size_t i = 0; i < rows.size(); ++i)
            fold_of[rows[i]] = static_cast<int>(i % folds);
    }

    std::vector<double> correct(cs.size(), 0.0);
    std::vector<long> counted(cs.size(), 0);
    int usable_folds = 0;
    for (int f = 0; f < folds; ++f) {
        std::vector<int> train_rows, val_rows;
        for (int j = 0; j < data.n(); ++j)
            (fold_of[j] == f ? val_rows : train_rows).push_back(j);
        if (val_rows.empty()) continue;
        const LongitudinalDataset train = data.subset(train_rows);
        if (train.n0() == 0 || train.n1() == 0) continue; // single-class fold
        ++usable_folds;
        auto [train_std, stats] = standardize(train);
        for (std::size_t gi = 0; gi < cs.size(); ++gi) {
            const LsvmModel model =
                fit_lsvm(train_std, cs[gi], tol, max_iter, decision_threshold);
            for (int v : val_rows) {
                LongitudinalDataset one = data.subset({v});
                const int pred = lsvm_predict(model, one.subject_matrix(0), stats);
                if (pred == data.labels[v]) correct[gi] += 1.0;
                ++counted[gi];
            }
        }
    }
    if (usable_folds == 0) throw EstimationError("select_c_grid: all folds skipped");

    std::size_t best = 0;
    double best_acc = -1.0;
    for (std::size_t gi = 0; gi < cs.size(); ++gi) {
        const double acc = correct[gi] / static_cast<double>(counted[gi]);
        if (acc > best_acc) { // strict: ties keep the earlier (smaller) C
            best_acc = acc;
            best = gi;
        }
    }
    return cs[best];
}

} // namespace longclass
