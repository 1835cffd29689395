#pragma once

#include "longclass/covariance.hpp"
#include "longclass/linalg.hpp"

namespace longclass {

/// Trained repeated-measures LDA rule. An observation x is assigned class 0
/// iff (x - midpoint)' * direction > threshold, ties to class 1.
struct LdaModel {
    Vector direction; // Sigma^{-1} (mu0 - mu1)
    Vector midpoint;  // (mu0 + mu1) / 2
    double threshold = 0.0; // log(pi1 / pi0)
    bool degenerate = false; // mu0 == mu1: direction is zero

    double decision_statistic(const Vector& x) const {
        return (x - midpoint).dot(direction);
    }
};

/// Builds the LDA rule from estimated group parameters. The unstructured
/// covariance is handled by a linear solve; Kronecker covariances use the
/// factor-inverse identity (A kron B)^{-1} = A^{-1} kron B^{-1} so only the
/// small factors are ever factorized.
LdaModel lda_train(const GroupParams& params);

/// 0 iff the decision statistic exceeds the threshold, else 1.
int lda_predict(const LdaModel& model, const Vector& x);

} // namespace longclass
