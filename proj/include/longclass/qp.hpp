#pragma once

#include "longclass/linalg.hpp"

namespace longclass {

/// Box-constrained convex QP with one linear equality constraint:
///   minimize 1/2 x'Qx + linear'x   s.t.  lo <= x <= hi,  eq_coeff'x = eq_target.
/// Q must be symmetric (1e-10) and positive semidefinite; curvature that is
/// negative only by rounding (above -1e-8) is treated as zero.
struct QpProblem {
    Matrix q;
    Vector linear;
    Vector lo;
    Vector hi;
    Vector eq_coeff;
    double eq_target = 0.0;

    void validate() const;
};

/// Solves the problem by pairwise coordinate updates that preserve the
/// equality constraint (the working pair is chosen by maximal KKT violation);
/// coordinates with zero equality coefficient move alone. Returns a
/// KKT-optimal point within tol. An optional warm start must be feasible
/// for the box (it is projected onto the hyperplane if slightly off).
Vector solve_qp(const QpProblem& problem, double tol = 1e-8, const Vector& warm_start = Vector());

/// Objective value 1/2 x'Qx + linear'x.
double qp_objective(const QpProblem& problem, const Vector& x);

} // namespace longclass
