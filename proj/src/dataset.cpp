#include "longclass/dataset.hpp"

#include <algorithm>

#include "longclass/errors.hpp"

namespace longclass {

int LongitudinalDataset::n0() const {
    return static_cast<int>(std::count(labels.begin(), labels.end(), 0));
}

int LongitudinalDataset::n1() const {
    return static_cast<int>(std::count(labels.begin(), labels.end(), 1));
}

Matrix LongitudinalDataset::subject_matrix(int subject) const {
    Matrix m(t, p);
    for (int k = 0; k < t; ++k)
        for (int l = 0; l < p; ++l) m(k, l) = values(subject, k * p + l);
    return m;
}

Matrix LongitudinalDataset::class_matrix(int label) const {
    const int rows = label == 0 ? n0() : n1();
    Matrix m(rows, dim());
    int r = 0;
    for (int j = 0; j < n(); ++j)
        if (labels[j] == label) m.row(r++) = values.row(j);
    return m;
}

LongitudinalDataset LongitudinalDataset::subset(const std::vector<int>& subject_indices) const {
    LongitudinalDataset out;
    out.p = p;
    out.t = t;
    out.variable_names = variable_names;
    out.values.resize(static_cast<Eigen::Index>(subject_indices.size()), dim());
    out.labels.reserve(subject_indices.size());
    Eigen::Index r = 0;
    for (int idx : subject_indices) {
        out.values.row(r++) = values.row(idx);
        out.labels.push_back(labels[idx]);
    }
    return out;
}

void LongitudinalDataset::validate(bool require_both_classes) const {
    if (p < 1 || t < 1) throw DataError("dataset: p and t must be >= 1");
    if (values.cols() != dim()) throw DataError("dataset: value width does not equal p*t");
    if (static_cast<Eigen::Index>(labels.size()) != values.rows())
        throw DataError("dataset: label count does not equal row count");
    for (int y : labels)
        if (y != 0 && y != 1) throw DataError("dataset: labels must be 0 or 1");
    if (require_both_classes && (n0() == 0 || n1() == 0))
        throw DataError("dataset: both classes must be present");
}

LongitudinalDataset make_dataset(Matrix values, std::vector<int> labels, int p, int t,
                                 std::vector<std::string> variable_names) {
    LongitudinalDataset ds;
    ds.values = std::move(values);
    ds.labels = std::move(labels);
    ds.p = p;
    ds.t = t;
    if (variable_names.empty()) {
        for (int l = 0; l < p; ++l) variable_names.push_back("var" + std::to_string(l + 1));
    }
    ds.variable_names = std::move(variable_names);
    ds.validate(false);
    return ds;
}

std::vector<int> time_major_to_var_major(int p, int t) {
    std::vector<int> perm(static_cast<std::size_t>(p) * t);
    for (int k = 0; k < t; ++k)
        for (int l = 0; l < p; ++l) perm[static_cast<std::size_t>(k) * p + l] = l * t + k;
    return perm;
}

Vector permute_vector(const Vector& v, const std::vector<int>& perm) {
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(perm[static_cast<std::size_t>(i)]) = v(i);
    return out;
}

Matrix permute_matrix(const Matrix& m, const std::vector<int>& perm) {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = m(i, j);
    return out;
}

} // namespace longclass
