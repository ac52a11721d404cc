#include "ermdp/planner.hpp"

#include <algorithm>
#include <cmath>

namespace ermdp {

namespace {

void check_schedule_args(double gamma, double eps) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw GammaOutOfRange(gamma);
    if (!(eps > 0.0)) throw NonPositiveEps("eps must be positive");
}

// ceil of the bound, +1 if the bound lands exactly on an integer, at least 1.
int schedule_from_bound(double bound) {
    if (!std::isfinite(bound)) throw NonPositiveEps("iteration bound is not finite");
    if (bound < 1.0) return 1;
    if (bound > 1e9) throw IterationCap(static_cast<long long>(bound));
    double k = std::ceil(bound);
    if (k == bound) k += 1.0;
    return static_cast<int>(k);
}

}  // namespace

int iterations_for_value_eps(double gamma, double eps) {
    check_schedule_args(gamma, eps);
    return schedule_from_bound(-std::log((1.0 - gamma) * eps) / std::log(1.0 / gamma));
}

int iterations_for_policy_eps(double gamma, double eps) {
    check_schedule_args(gamma, eps);
    const double bound =
        (std::log(2.0) - std::log((1.0 - gamma) * (1.0 - gamma) * eps)) / std::log(1.0 / gamma);
    return schedule_from_bound(bound);
}

PlanResult rs_qvi(const TabularMdp& m, int k) {
    if (k < 1) throw NonPositiveEps("iteration count must be positive");
    QFunction q = QFunction::zeros(m.num_states(), m.num_actions());
    double delta = 0.0;
    for (int j = 0; j < k; ++j) {
        QFunction next = apply_optimal_bellman(m, q);
        delta = sup_norm_distance(next, q);
        q = std::move(next);
    }
    Policy pi = greedy_from_q(q);
    return PlanResult{std::move(q), std::move(pi), k, delta};
}

PlanResult solve_exact(const TabularMdp& m, double tol) {
    if (!(tol > 0.0)) throw NonPositiveEps("tol must be positive");
    const double sweep_threshold = tol * (1.0 - m.gamma()) / m.gamma();
    QFunction q = QFunction::zeros(m.num_states(), m.num_actions());
    for (long long iter = 1; iter <= kMaxSolverSweeps; ++iter) {
        QFunction next = apply_optimal_bellman(m, q);
        const double delta = sup_norm_distance(next, q);
        q = std::move(next);
        if (delta <= sweep_threshold) {
            Policy pi = greedy_from_q(q);
            return PlanResult{std::move(q), std::move(pi), static_cast<int>(iter), delta};
        }
    }
    throw IterationCap(kMaxSolverSweeps);
}

QFunction evaluate_policy(const TabularMdp& m, const Policy& pi, double tol) {
    if (!(tol > 0.0)) throw NonPositiveEps("tol must be positive");
    const double sweep_threshold = tol * (1.0 - m.gamma()) / m.gamma();
    QFunction q = QFunction::zeros(m.num_states(), m.num_actions());
    for (long long iter = 1; iter <= kMaxSolverSweeps; ++iter) {
        QFunction next = apply_policy_bellman(m, pi, q);
        const double delta = sup_norm_distance(next, q);
        q = std::move(next);
        if (delta <= sweep_threshold) return q;
    }
    throw IterationCap(kMaxSolverSweeps);
}

Policy greedy_from_v(const TabularMdp& m, const VFunction& v) {
    if (static_cast<int>(v.values.size()) != m.num_states())
        throw ShapeMismatch("value vector length does not match num_states");
    Policy pi;
    pi.actions.resize(m.num_states());
    for (int s = 0; s < m.num_states(); ++s) {
        int best = 0;
        double best_value = m.reward(s, 0) + m.gamma() * rho_sa(m, s, 0, v);
        for (int a = 1; a < m.num_actions(); ++a) {
            const double value = m.reward(s, a) + m.gamma() * rho_sa(m, s, a, v);
            if (value > best_value) {
                best_value = value;
                best = a;
            }
        }
        pi.actions[s] = best;
    }
    return pi;
}

GreedyDeteriorationReport greedy_deterioration_check(const TabularMdp& m,
                                                     const VFunction& v_bar, double tol) {
    const PlanResult exact = solve_exact(m, tol);
    const VFunction v_star = v_max_from_q(exact.q);
    const double alpha = sup_norm_distance(v_star, v_bar);
    const Policy greedy = greedy_from_v(m, v_bar);
    const QFunction q_greedy = evaluate_policy(m, greedy, tol);
    const VFunction v_greedy = v_from_q_under_policy(q_greedy, greedy);
    const double greedy_error = sup_norm_distance(v_star, v_greedy);
    const double bound = 2.0 * m.gamma() * alpha / (1.0 - m.gamma());
    return GreedyDeteriorationReport{alpha, greedy_error, bound,
                                     greedy_error <= bound + 1e-9};
}

}  // namespace ermdp
