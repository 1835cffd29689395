#pragma once

#include <utility>
#include <variant>

#include "longclass/linalg.hpp"

namespace longclass {

/// Separable covariance Sigma = kron(sigma_t, sigma_p) in the time-major
/// layout (time factor t x t, variable factor p x p). Normalized so that
/// sigma_t(0,0) = 1; the overall scale lives in sigma_p.
struct KroneckerCov {
    Matrix sigma_t;
    Matrix sigma_p;

    int t() const { return static_cast<int>(sigma_t.rows()); }
    int p() const { return static_cast<int>(sigma_p.rows()); }

    Matrix full() const; // kron(sigma_t, sigma_p)
};

/// Parameter bundle for the repeated-measures LDA rule: class means, a common
/// covariance (unstructured or Kronecker-factored) and class priors.
struct GroupParams {
    Vector mu0;
    Vector mu1;
    std::variant<Matrix, KroneckerCov> cov;
    double prior0 = 0.5;
    double prior1 = 0.5;

    void validate() const;
};

/// Weighted pool ((n0-1)*cov0 + (n1-1)*cov1) / ((n0-1) + (n1-1)).
Matrix pooled_covariance(const Matrix& cov0, int n0, const Matrix& cov1, int n1);

/// Factorwise pool of two Kronecker covariances with (n_i - 1) weights.
KroneckerCov pooled_kronecker(const KroneckerCov& f0, int n0, const KroneckerCov& f1, int n1);

struct FlipFlopResult {
    KroneckerCov cov;
    bool converged = false;
    int iterations = 0;
};

/// Maximum-likelihood Kronecker factors by alternating closed-form updates.
///
/// Rows of data_centered are observations already centered by their group
/// mean, flat in time-major layout (index k*p + l). Alternates
///   sigma_t <- (1/(n p)) sum_j X_j sigma_p^{-1} X_j^T      (X_j is t x p)
///   sigma_p <- (1/(n t)) sum_j X_j^T sigma_t^{-1} X_j
/// until ||kron_m - kron_{m-1}||_F <= tol or max_iter, then rescales so
/// sigma_t(0,0) = 1. Requires n*p > t and n*t > p.
FlipFlopResult flip_flop(const Matrix& data_centered, int p, int t, double tol = 1e-4,
                         int max_iter = 200, const Matrix& sigma_p_init = Matrix());

/// Gaussian log-likelihood of centered data under kron(sigma_t, sigma_p);
/// used to monitor the ascent property of the flip-flop iteration.
double kronecker_loglik(const Matrix& data_centered, int p, int t, const KroneckerCov& cov);

/// Kronecker product; (kron(A,B))[(i*c)+k, (j*d)+m] = A(i,j)*B(k,m).
Matrix kron(const Matrix& a, const Matrix& b);

/// Free-parameter counts of an unstructured pt x pt covariance vs the
/// Kronecker pair: (pt(pt+1)/2, p(p+1)/2 + t(t+1)/2).
std::pair<long, long> kronecker_param_count(int p, int t);

} // namespace longclass
