#pragma once

#include "ermdp/risk.hpp"

namespace ermdp {

/// Sweep cap for the fixed-point solvers.
inline constexpr long long kMaxSolverSweeps = 10'000'000;

struct PlanResult {
    QFunction q;
    Policy policy;              ///< greedy with respect to q
    int iterations_used = 0;
    double final_sweep_delta = 0.0;  ///< sup-norm change of the last sweep
};

/// Smallest iteration count k guaranteeing ||Q_k - Q*|| < eps when iterating
/// the optimal backup from the zero table:
///   k >= -log((1-gamma) eps) / log(1/gamma).
/// Returns ceil of the bound, +1 when the bound is integer-valued (the
/// guarantee is strict), floored at 1.
int iterations_for_value_eps(double gamma, double eps);

/// Iteration count guaranteeing ||V^{pi_k} - V*|| < eps for the greedy policy
/// of the k-th iterate:
///   k >= (log 2 - log((1-gamma)^2 eps)) / log(1/gamma).
/// Same ceiling-with-strictness rule; always >= iterations_for_value_eps.
int iterations_for_policy_eps(double gamma, double eps);

/// Risk-sensitive Q-value iteration: k synchronous applications of the
/// optimal Bellman operator to the zero table, plus the greedy policy of the
/// result.
PlanResult rs_qvi(const TabularMdp& m, int k);

/// Iterates the optimal backup until the sweep delta guarantees
/// ||q - Q*|| <= tol via the contraction constant (delta <= tol*(1-gamma)/gamma).
/// Ground-truth oracle throughout tests and experiments.
/// Throws IterationCap after kMaxSolverSweeps sweeps.
PlanResult solve_exact(const TabularMdp& m, double tol);

/// Fixed point of the policy backup within tol in sup-norm. The policy's
/// state values are recoverable as V(s) = Q(s, pi(s)).
QFunction evaluate_policy(const TabularMdp& m, const Policy& pi, double tol);

/// Outcome of checking the greedy-deterioration bound
/// ||V* - V^{pi_G}|| <= 2 gamma alpha / (1 - gamma) for the policy greedy
/// with respect to an approximate value vector v_bar.
struct GreedyDeteriorationReport {
    double alpha;         ///< ||V* - v_bar||
    double greedy_error;  ///< ||V* - V^{pi_G}||
    double bound;         ///< 2 gamma alpha / (1 - gamma)
    bool holds;           ///< greedy_error <= bound + 1e-9
};

GreedyDeteriorationReport greedy_deterioration_check(const TabularMdp& m,
                                                     const VFunction& v_bar, double tol);

/// Greedy policy with respect to a state-value vector:
/// pi(s) = argmax_a [R(s,a) + gamma rho_{s,a}(v)], ties to the lowest index.
Policy greedy_from_v(const TabularMdp& m, const VFunction& v);

}  // namespace ermdp
