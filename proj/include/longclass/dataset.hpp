#pragma once

#include <string>
#include <vector>

#include "longclass/linalg.hpp"

namespace longclass {

/// Complete repeated-measures panel: n subjects, p variables, t time points,
/// binary group labels.
///
/// Values are held flat in time-major layout: the coordinate of variable l
/// (0-based) at time k (0-based) sits at flat index k*p + l, i.e. all p
/// variables at time 1, then all p variables at time 2, and so on. This is
/// the canonical layout for every pt-length vector and pt x pt matrix in the
/// library; the variable-major view needed by some estimators is reachable
/// through the permutation helpers below.
struct LongitudinalDataset {
    Matrix values;                           // n x (p*t), time-major
    std::vector<int> labels;                 // n entries in {0,1}
    std::vector<std::string> variable_names; // p entries
    int p = 0;
    int t = 0;

    int n() const { return static_cast<int>(values.rows()); }
    int dim() const { return p * t; }

    int n0() const;
    int n1() const;

    double value(int subject, int var, int time) const { return values(subject, time * p + var); }

    /// t x p matrix view of one subject (row k = time k).
    Matrix subject_matrix(int subject) const;

    /// Rows of a given class, in original order.
    Matrix class_matrix(int label) const;

    /// Subset by subject indices (order preserved, labels carried along).
    LongitudinalDataset subset(const std::vector<int>& subject_indices) const;

    /// Validates shape, labels and presence of both classes where required.
    void validate(bool require_both_classes = true) const;
};

/// Builds a dataset from a flat time-major matrix and labels.
LongitudinalDataset make_dataset(Matrix values, std::vector<int> labels, int p, int t,
                                 std::vector<std::string> variable_names = {});

/// Permutation taking a time-major flat index to the variable-major index
/// (variable l's t measurements contiguous). perm[k*p+l] = l*t+k.
std::vector<int> time_major_to_var_major(int p, int t);

/// Applies an index permutation to a vector: out[perm[i]] = v[i].
Vector permute_vector(const Vector& v, const std::vector<int>& perm);

/// Conjugates a matrix by an index permutation: out[perm[i], perm[j]] = m[i, j].
Matrix permute_matrix(const Matrix& m, const std::vector<int>& perm);

} // namespace longclass
