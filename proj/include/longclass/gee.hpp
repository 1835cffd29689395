#pragma once

#include "longclass/covariance.hpp"
#include "longclass/linalg.hpp"

namespace longclass {

/// Design of the joint marginal model: per variable an intercept and a linear
/// time trend, identity link. In the library's time-major layout the design
/// matrix Z is pt x 2p with Z[k*p+l, 2l] = 1 and Z[k*p+l, 2l+1] = k+1
/// (the block-diagonal form of the variable-major presentation).
struct GeeDesign {
    int t = 0;
    int p = 0;

    Matrix design_matrix() const;

    int n_params() const { return 2 * p; }
};

/// Fitted joint GEE for one class. All pt-length quantities are time-major;
/// the working covariance satisfies
///   model_cov = psi * A^{1/2} kron(r_t, r_p) A^{1/2}
/// which is the time-major expression of the variable-major display
/// psi * A^{1/2} (R_p kron R_t) A^{1/2} (the two are permutation-conjugate).
struct GeeFit {
    Vector beta;       // 2p, (intercept_l, slope_l) pairs
    Matrix r_t;        // t x t working correlation over time points
    Matrix r_p;        // p x p working correlation over variables
    double psi = 1.0;  // scale
    Vector a_diag;     // pt marginal residual variances
    Vector fitted_mu;  // pt, = Z * beta
    Matrix model_cov;  // pt x pt working covariance
    bool converged = false;
    bool degenerate = false; // residuals identically zero (psi = 0)
    int iterations = 0;
};

/// Fits the joint GEE by Fisher scoring: alternates the beta update
///   beta <- beta + (sum_j Z' S^{-1} Z)^{-1} sum_j Z' S^{-1} (x_j - Z beta)
/// with moment re-estimation of psi and the unstructured working correlations
/// r_t (row products of standardized residuals, averaged over variables and
/// subjects) and r_p (column products averaged over times and subjects), each
/// symmetrized, unit diagonal, off-diagonals clipped to [-0.99, 0.99].
/// Stops when the max-norm change of beta drops below tol.
GeeFit fit_joint_gee(const Matrix& class_data, const GeeDesign& design, double tol = 1e-8,
                     int max_iter = 50);

/// Robust sandwich covariance of beta (diagnostic; the LDA rule consumes the
/// working covariance of the observations, not this 2p x 2p matrix).
Matrix gee_sandwich_cov(const GeeFit& fit, const Matrix& class_data, const GeeDesign& design);

/// Plugs two per-class fits into LDA parameters: class means from the fitted
/// marginal means, common covariance from pooling the working covariances,
/// empirical priors.
GroupParams gee_lda_params(const GeeFit& fit0, int n0, const GeeFit& fit1, int n1);

} // namespace longclass
