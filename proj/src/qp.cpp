#include "longclass/qp.hpp"

#include <cmath>
#include <limits>

#include "longclass/errors.hpp"

namespace longclass {

namespace {

constexpr double kCurvatureFloor = 1e-12;
constexpr double kDiagonalTol = 1e-8;
constexpr long kMaxUpdates = 10000000;

double box_min_dot(const Vector& a, const Vector& lo, const Vector& hi) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) >= 0 ? a(i) * lo(i) : a(i) * hi(i);
    return s;
}

double box_max_dot(const Vector& a, const Vector& lo, const Vector& hi) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) >= 0 ? a(i) * hi(i) : a(i) * lo(i);
    return s;
}

} // namespace

void QpProblem::validate() const {
    const Eigen::Index n = q.rows();
    if (q.cols() != n || linear.size() != n || lo.size() != n || hi.size() != n ||
        eq_coeff.size() != n)
        throw ConfigError("QpProblem: inconsistent dimensions");
    if (!is_symmetric(q, 1e-10)) throw ConfigError("QpProblem: Q not symmetric");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(lo(i) <= hi(i))) throw ConfigError("QpProblem: box lower bound above upper bound");
        if (q(i, i) < -kDiagonalTol) throw QpError("QpProblem: Q has a negative diagonal entry");
    }
}

double qp_objective(const QpProblem& problem, const Vector& x) {
    return 0.5 * x.dot(problem.q * x) + problem.linear.dot(x);
}

Vector solve_qp(const QpProblem& problem, double tol, const Vector& warm_start) {
    problem.validate();
    const Eigen::Index n = problem.q.rows();
    const Vector& a = problem.eq_coeff;
    const Vector& lo = problem.lo;
    const Vector& hi = problem.hi;

    const double feas_slack = 1e-9 * (1.0 + std::abs(problem.eq_target));
    if (problem.eq_target < box_min_dot(a, lo, hi) - feas_slack ||
        problem.eq_target > box_max_dot(a, lo, hi) + feas_slack)
        throw QpError("solve_qp: infeasible constraints");

    // feasible start: clamp, then absorb the hyperplane residual
    Vector x(n);
    if (warm_start.size() == n) {
        for (Eigen::Index i = 0; i < n; ++i) x(i) = std::clamp(warm_start(i), lo(i), hi(i));
    } else {
        for (Eigen::Index i = 0; i < n; ++i) x(i) = std::clamp(0.0, lo(i), hi(i));
    }
    double resid = problem.eq_target - a.dot(x);
    for (int pass = 0; pass < 2 && std::abs(resid) > feas_slack; ++pass) {
        for (Eigen::Index i = 0; i < n && std::abs(resid) > feas_slack; ++i) {
            if (a(i) == 0.0) continue;
            const double target = std::clamp(x(i) + resid / a(i), lo(i), hi(i));
            resid -= a(i) * (target - x(i));
            x(i) = target;
        }
    }
    if (std::abs(resid) > feas_slack) throw QpError("solve_qp: infeasible constraints");

    Vector g = problem.q * x + problem.linear;

    long updates = 0;
    for (;;) {
        if (++updates > kMaxUpdates) throw QpError("solve_qp: update cap exceeded");

        // best single move among unconstrained coordinates (eq coefficient 0)
        Eigen::Index best_free = -1;
        double free_viol = tol;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (a(i) != 0.0) continue;
            double v = 0.0;
            if (x(i) <= lo(i)) v = std::max(0.0, -g(i));
            else if (x(i) >= hi(i)) v = std::max(0.0, g(i));
            else v = std::abs(g(i));
            if (v > free_viol) {
                free_viol = v;
                best_free = i;
            }
        }

        // maximal-violation pair among the equality-coupled coordinates;
        // phi = g/a is the candidate multiplier for the equality constraint
        Eigen::Index up = -1, down = -1;
        double phi_up = std::numeric_limits<double>::infinity();
        double phi_down = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (a(i) == 0.0) continue;
            const double phi = g(i) / a(i);
            const bool can_plus = a(i) > 0 ? x(i) < hi(i) : x(i) > lo(i);
            const bool can_minus = a(i) > 0 ? x(i) > lo(i) : x(i) < hi(i);
            if (can_plus && phi < phi_up) {
                phi_up = phi;
                up = i;
            }
            if (can_minus && phi > phi_down) {
                phi_down = phi;
                down = i;
            }
        }
        const double pair_viol = (up >= 0 && down >= 0 && up != down) ? phi_down - phi_up
                                                                      : -std::numeric_limits<double>::infinity();

        if (free_viol <= tol && pair_viol <= tol) break;

        if (free_viol > pair_viol) {
            const Eigen::Index i = best_free;
            double step;
            if (problem.q(i, i) > kCurvatureFloor) step = -g(i) / problem.q(i, i);
            else step = g(i) > 0 ? lo(i) - x(i) : hi(i) - x(i);
            const double nx = std::clamp(x(i) + step, lo(i), hi(i));
            const double delta = nx - x(i);
            if (delta == 0.0) break; // pinned by rounding
            x(i) = nx;
            g += delta * problem.q.col(i);
            continue;
        }

        // pair move x_up += s/a_up, x_down -= s/a_down keeps a'x constant
        const Eigen::Index i = up, j = down;
        const double ai = a(i), aj = a(j);
        const double slope = phi_up - phi_down; // negative
        const double eta = problem.q(i, i) / (ai * ai) + problem.q(j, j) / (aj * aj) -
                           2.0 * problem.q(i, j) / (ai * aj);
        const double cap_i = ai > 0 ? ai * (hi(i) - x(i)) : ai * (lo(i) - x(i));
        const double cap_j = aj > 0 ? aj * (x(j) - lo(j)) : aj * (x(j) - hi(j));
        const double s_max = std::min(cap_i, cap_j);
        double s = eta > kCurvatureFloor ? std::min(-slope / eta, s_max) : s_max;
        if (!(s > 0.0)) break; // no feasible progress left
        const double di = s / ai, dj = -s / aj;
        x(i) += di;
        x(j) += dj;
        if (s == cap_i) x(i) = ai > 0 ? hi(i) : lo(i);
        if (s == cap_j) x(j) = aj > 0 ? lo(j) : hi(j);
        g += di * problem.q.col(i) + dj * problem.q.col(j);
    }
    return x;
}

} // namespace longclass
