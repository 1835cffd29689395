#include "longclass/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "longclass/errors.hpp"
#include "longclass/rng.hpp"

namespace longclass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kExhaustiveLimit = 12;
constexpr int kTopCandidates = 10;
constexpr int kInitialCSteps = 2;
constexpr double kRefineTol = 1e-12;

struct SubsetStats {
    Vector mean;
    Matrix cov;      // divisor h-1
    bool singular = false;
    Matrix chol;     // lower factor when nonsingular
};

SubsetStats subset_stats(const Matrix& data, const std::vector<int>& idx) {
    const Eigen::Index d = data.cols();
    SubsetStats s;
    s.mean = Vector::Zero(d);
    for (int i : idx) s.mean += data.row(i).transpose();
    s.mean /= static_cast<double>(idx.size());
    s.cov = Matrix::Zero(d, d);
    for (int i : idx) {
        const Vector c = data.row(i).transpose() - s.mean;
        s.cov.noalias() += c * c.transpose();
    }
    s.cov /= static_cast<double>(idx.size()) - 1.0;
    s.cov = 0.5 * (s.cov + s.cov.transpose());
    try {
        s.chol = cholesky_lower(s.cov, "subset covariance");
    } catch (const EstimationError&) {
        s.singular = true;
    }
    return s;
}

double logdet_from_chol(const Matrix& chol) {
    return 2.0 * chol.diagonal().array().log().sum();
}

/// Squared Mahalanobis distances of every row to (mean, cov) via the factor.
Vector mahalanobis_sq(const Matrix& data, const SubsetStats& s) {
    const Eigen::Index n = data.rows();
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vector c = data.row(i).transpose() - s.mean;
        const Vector z = s.chol.triangularView<Eigen::Lower>().solve(c);
        out(i) = z.squaredNorm();
    }
    return out;
}

double log_unit_ball_volume(int d) {
    constexpr double kLogPi = 1.1447298858494001741434273513531;
    return 0.5 * d * kLogPi - std::lgamma(0.5 * d + 1.0);
}

/// MCD objective: log det of the subset covariance. MVE objective: log volume
/// of the ellipsoid with the subset's covariance shape, inflated to cover all
/// subset points. Both are +inf for singular subsets.
double evaluate_objective(const Matrix& data, const std::vector<int>& idx, bool mve,
                          const SubsetStats& s) {
    if (s.singular) return kInf;
    const double ld = logdet_from_chol(s.chol);
    if (!mve) return ld;
    double max_sq = 0.0;
    for (int i : idx) {
        const Vector c = data.row(i).transpose() - s.mean;
        const Vector z = s.chol.triangularView<Eigen::Lower>().solve(c);
        max_sq = std::max(max_sq, z.squaredNorm());
    }
    if (!(max_sq > 0.0)) return kInf;
    const int d = static_cast<int>(data.cols());
    return log_unit_ball_volume(d) + 0.5 * (d * std::log(max_sq) + ld);
}

struct Candidate {
    std::vector<int> kept; // sorted
    SubsetStats stats;
    double objective = kInf;
};

bool candidate_better(const Candidate& a, const Candidate& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    return a.kept < b.kept; // tie: lexicographically smallest kept set
}

/// One concentration step: keep the h rows closest to the current estimate.
std::vector<int> c_step(const Matrix& data, const SubsetStats& s, int h) {
    const Vector d2 = mahalanobis_sq(data, s);
    std::vector<int> order(static_cast<std::size_t>(data.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return d2(a) < d2(b); });
    std::vector<int> kept(order.begin(), order.begin() + h);
    std::sort(kept.begin(), kept.end());
    return kept;
}

Candidate make_candidate(const Matrix& data, std::vector<int> kept, bool mve) {
    Candidate c;
    c.kept = std::move(kept);
    std::sort(c.kept.begin(), c.kept.end());
    c.stats = subset_stats(data, c.kept);
    c.objective = evaluate_objective(data, c.kept, mve, c.stats);
    return c;
}

void consider(Candidate& best, const Candidate& cand) {
    if (best.kept.empty() || candidate_better(cand, best)) best = cand;
}

TrimResult exhaustive_search(const Matrix& data, int h, bool mve) {
    const int n = static_cast<int>(data.rows());
    Candidate best;
    std::vector<int> idx(h);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        Candidate cand = make_candidate(data, idx, mve);
        if (std::isfinite(cand.objective)) consider(best, cand);
        // next combination in lexicographic order
        int i = h - 1;
        while (i >= 0 && idx[i] == n - h + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < h; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (best.kept.empty())
        throw EstimationError("degenerate variable: unique quantiles undeterminable");
    TrimResult res;
    res.kept_indices = best.kept;
    res.location = best.stats.mean;
    res.scatter = best.stats.cov;
    res.objective = best.objective;
    return res;
}

TrimResult randomized_search(const Matrix& data, int h, int n_starts, std::uint64_t seed,
                             bool mve) {
    const int n = static_cast<int>(data.rows());
    const int d = static_cast<int>(data.cols());
    Rng64 rng(seed);

    std::vector<Candidate> pool;
    std::vector<int> scratch(n);

    for (int s = 0; s < n_starts; ++s) {
        // elemental start of d+1 distinct rows, grown until nonsingular
        std::iota(scratch.begin(), scratch.end(), 0);
        for (int i = 0; i < n; ++i) {
            const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
            std::swap(scratch[i], scratch[j]);
        }
        int size = std::min(d + 1, n);
        std::vector<int> idx(scratch.begin(), scratch.begin() + size);
        SubsetStats st = subset_stats(data, idx);
        while (st.singular && size < n) {
            idx.push_back(scratch[size++]);
            st = subset_stats(data, idx);
        }
        if (st.singular) continue;

        Candidate cand;
        for (int step = 0; step < kInitialCSteps; ++step) {
            std::vector<int> kept = c_step(data, st, h);
            cand = make_candidate(data, std::move(kept), mve);
            if (cand.stats.singular) break;
            st = cand.stats;
        }
        if (!cand.kept.empty() && std::isfinite(cand.objective)) pool.push_back(std::move(cand));
    }

    if (pool.empty())
        throw EstimationError("degenerate variable: unique quantiles undeterminable");

    std::sort(pool.begin(), pool.end(), candidate_better);
    pool.erase(std::unique(pool.begin(), pool.end(),
                           [](const Candidate& a, const Candidate& b) { return a.kept == b.kept; }),
               pool.end());
    if (static_cast<int>(pool.size()) > kTopCandidates) pool.resize(kTopCandidates);

    Candidate best;
    for (Candidate cand : pool) {
        consider(best, cand);
        for (int iter = 0; iter < 200; ++iter) {
            std::vector<int> kept = c_step(data, cand.stats, h);
            if (kept == cand.kept) break;
            Candidate next = make_candidate(data, std::move(kept), mve);
            if (next.stats.singular) break;
            const double delta = cand.objective - next.objective;
            cand = std::move(next);
            consider(best, cand);
            if (std::abs(delta) < kRefineTol) break;
        }
    }
    if (best.kept.empty())
        throw EstimationError("degenerate variable: unique quantiles undeterminable");

    TrimResult res;
    res.kept_indices = best.kept;
    res.location = best.stats.mean;
    res.scatter = best.stats.cov;
    res.objective = best.objective;
    return res;
}

TrimResult subset_trim(const Matrix& data, int h, int n_starts, std::uint64_t seed,
                       SubsetSearch search, bool mve) {
    const int n = static_cast<int>(data.rows());
    const int d = static_cast<int>(data.cols());
    if (n <= d + 1) throw ConfigError("subset search: need n > d+1");
    if (h > n) throw ConfigError("subset search: h must be <= n");
    if (h <= d) throw ConfigError("subset search: h must be > d");
    if (2.0 * h < n + d + 1)
        throw ConfigError("subset search: h below the (n+d+1)/2 subset-size floor");

    const bool exhaustive = search == SubsetSearch::exhaustive ||
                            (search == SubsetSearch::automatic && n <= kExhaustiveLimit);
    TrimResult res = exhaustive ? exhaustive_search(data, h, mve)
                                : randomized_search(data, h, n_starts, seed, mve);

    // MVE reports the covering ellipsoid as its scatter
    if (mve) {
        SubsetStats st = subset_stats(data, res.kept_indices);
        double max_sq = 0.0;
        for (int i : res.kept_indices) {
            const Vector c = data.row(i).transpose() - st.mean;
            const Vector z = st.chol.triangularView<Eigen::Lower>().solve(c);
            max_sq = std::max(max_sq, z.squaredNorm());
        }
        res.scatter = max_sq * st.cov;
    }
    return res;
}

} // namespace

TrimResult mcd_trim(const Matrix& data, int h, int n_starts, std::uint64_t seed,
                    SubsetSearch search) {
    return subset_trim(data, h, n_starts, seed, search, /*mve=*/false);
}

TrimResult mve_trim(const Matrix& data, int h, int n_starts, std::uint64_t seed,
                    SubsetSearch search) {
    return subset_trim(data, h, n_starts, seed, search, /*mve=*/true);
}

LongitudinalDataset trim_dataset(const LongitudinalDataset& ds, double keep_fraction,
                                 TrimMethod method, std::uint64_t seed, int n_starts) {
    if (!(keep_fraction > 0.5) || !(keep_fraction <= 1.0))
        throw ConfigError("trim_dataset: keep_fraction must be in (0.5, 1]");
    if (method == TrimMethod::none || keep_fraction == 1.0) return ds;
    ds.validate();

    std::vector<int> kept_subjects;
    for (int label = 0; label <= 1; ++label) {
        std::vector<int> class_rows;
        for (int j = 0; j < ds.n(); ++j)
            if (ds.labels[j] == label) class_rows.push_back(j);
        const int ni = static_cast<int>(class_rows.size());
        const int h = static_cast<int>(std::ceil(keep_fraction * ni));
        Matrix class_data(ni, ds.dim());
        for (int r = 0; r < ni; ++r) class_data.row(r) = ds.values.row(class_rows[r]);

        const std::uint64_t class_seed =
            derive_seed(seed, static_cast<std::uint64_t>(label),
                        method == TrimMethod::mcd ? 2u : 1u);
        const TrimResult tr = method == TrimMethod::mcd
                                  ? mcd_trim(class_data, h, n_starts, class_seed)
                                  : mve_trim(class_data, h, n_starts, class_seed);
        for (int r : tr.kept_indices) kept_subjects.push_back(class_rows[r]);
    }
    std::sort(kept_subjects.begin(), kept_subjects.end());
    return ds.subset(kept_subjects);
}

const char* trim_method_name(TrimMethod m) {
    switch (m) {
        case TrimMethod::none: return "none";
        case TrimMethod::mve: return "mve";
        case TrimMethod::mcd: return "mcd";
    }
    return "none";
}

TrimMethod trim_method_from_name(const std::string& name) {
    if (name == "none") return TrimMethod::none;
    if (name == "mve") return TrimMethod::mve;
    if (name == "mcd") return TrimMethod::mcd;
    throw ConfigError("unknown trimming method '" + name + "'");
}

} // namespace longclass
