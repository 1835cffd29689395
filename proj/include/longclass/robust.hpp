#pragma once

#include <cstdint>
#include <vector>

#include "longclass/dataset.hpp"
#include "longclass/linalg.hpp"

namespace longclass {

/// Output of an h-subset search: the retained rows and the location/scatter
/// of that subset. objective is the log-determinant of the subset covariance
/// for MCD and the log-volume of the covering ellipsoid for MVE.
struct TrimResult {
    std::vector<int> kept_indices; // sorted, size h
    Vector location;
    Matrix scatter;
    double objective = 0.0;
};

enum class TrimMethod { none, mve, mcd };

enum class SubsetSearch { automatic, exhaustive, randomized };

/// Minimum covariance determinant subset estimator.
///
/// Finds the h-subset whose sample covariance has minimal determinant.
/// Exhaustive over all C(n,h) subsets for n <= 12; otherwise FAST-MCD-style
/// concentration from n_starts random elemental starts (2 concentration steps
/// each, top 10 candidates refined until the objective changes < 1e-12).
/// Ties are broken by the lexicographically smallest kept-index set.
TrimResult mcd_trim(const Matrix& data, int h, int n_starts, std::uint64_t seed,
                    SubsetSearch search = SubsetSearch::automatic);

/// Minimum volume ellipsoid subset estimator: same search as mcd_trim but the
/// objective is the volume of the smallest ellipsoid with the subset's shape
/// that covers the whole subset (subset covariance scaled by the subset's
/// maximal squared Mahalanobis distance).
TrimResult mve_trim(const Matrix& data, int h, int n_starts, std::uint64_t seed,
                    SubsetSearch search = SubsetSearch::automatic);

/// Removes multivariate outliers from the training panel, class by class,
/// keeping h_i = ceil(keep_fraction * n_i) subjects of class i. method none
/// or keep_fraction = 1 return the input unchanged.
LongitudinalDataset trim_dataset(const LongitudinalDataset& ds, double keep_fraction,
                                 TrimMethod method, std::uint64_t seed, int n_starts = 500);

const char* trim_method_name(TrimMethod m);
TrimMethod trim_method_from_name(const std::string& name);

} // namespace longclass
