#pragma once

// Dense enumeration oracle for small box+equality QPs: every coordinate is
// fixed at its lower bound, its upper bound, or left free; each configuration
// yields a stationarity system whose solution (when primal feasible) is a
// candidate. All candidates are feasible points of the convex program, and the
// optimal active set is among the configurations, so the minimum candidate
// objective equals the optimum. Independent of the production solver path.

#include <limits>
#include <vector>

#include <longclass/qp.hpp>

namespace longclass {

inline double qp_brute_force_objective(const QpProblem& p) {
    const int n = static_cast<int>(p.q.rows());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> state(static_cast<std::size_t>(n), 0); // 0 lo, 1 hi, 2 free
    const double feas_tol = 1e-9;

    for (;;) {
        std::vector<int> free_idx, bound_idx;
        for (int i = 0; i < n; ++i) (state[i] == 2 ? free_idx : bound_idx).push_back(i);

        Vector x(n);
        for (int i : bound_idx) x(i) = state[i] == 0 ? p.lo(i) : p.hi(i);

        bool feasible = true;
        if (free_idx.empty()) {
            feasible = std::abs(p.eq_coeff.dot(x) - p.eq_target) <= feas_tol;
        } else {
            const int f = static_cast<int>(free_idx.size());
            Matrix k = Matrix::Zero(f + 1, f + 1);
            Vector rhs = Vector::Zero(f + 1);
            for (int a = 0; a < f; ++a) {
                for (int b = 0; b < f; ++b) k(a, b) = p.q(free_idx[a], free_idx[b]);
                k(a, f) = -p.eq_coeff(free_idx[a]);
                k(f, a) = p.eq_coeff(free_idx[a]);
                double r = -p.linear(free_idx[a]);
                for (int i : bound_idx) r -= p.q(free_idx[a], i) * x(i);
                rhs(a) = r;
            }
            double s = p.eq_target;
            for (int i : bound_idx) s -= p.eq_coeff(i) * x(i);
            rhs(f) = s;
            Eigen::FullPivLU<Matrix> lu(k);
            const Vector sol = lu.solve(rhs);
            if ((k * sol - rhs).lpNorm<Eigen::Infinity>() > 1e-7) {
                feasible = false; // inconsistent configuration
            } else {
                for (int a = 0; a < f && feasible; ++a) {
                    const double v = sol(a);
                    if (v < p.lo(free_idx[a]) - feas_tol || v > p.hi(free_idx[a]) + feas_tol)
                        feasible = false;
                    x(free_idx[a]) = v;
                }
            }
        }
        if (feasible) best = std::min(best, qp_objective(p, x));

        // next configuration in base 3
        int pos = 0;
        while (pos < n && state[pos] == 2) state[pos++] = 0;
        if (pos == n) break;
        ++state[pos];
    }
    return best;
}

} // namespace longclass
