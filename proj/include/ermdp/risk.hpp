#pragma once

#include <span>
#include <vector>

#include "ermdp/mdp.hpp"

namespace ermdp {

/// Finite distribution over real support values.
struct Distribution {
    std::vector<double> probs;
    std::vector<double> support_values;
};

/// Entropic risk of a finite distribution:
///
///   rho(X; beta) = -(1/beta) log E[exp(-beta X)],      beta != 0
///   rho(X; 0)    = E[X]                                (risk-neutral)
///
/// Evaluated with exponent shifting: with m* the smallest (beta > 0) or
/// largest (beta < 0) support value carrying positive probability,
///
///   rho = m* - (1/beta) log sum_i p_i exp(-beta (x_i - m*)),
///
/// so every exponent is <= 0 and no intermediate overflows for any
/// |beta * x| a double can express. The inner sum is accumulated through
/// expm1/log1p, which keeps the beta -> 0 limit accurate.
double erm_rho(const Distribution& d, double beta);

/// Same, over a probability row and matching support span. The row is
/// assumed valid (callers pass rows of a validated model).
double erm_rho(std::span<const double> probs, std::span<const double> values, double beta);

/// Per-state-action risk backup: rho applied to the next-state distribution
/// P(.|s,a) with support v.
double rho_sa(const TabularMdp& m, int s, int a, const VFunction& v);

/// Optimal Bellman operator:
///   (T f)(s,a) = R(s,a) + gamma * rho_{s,a}(max_a' f(., a')).
QFunction apply_optimal_bellman(const TabularMdp& m, const QFunction& q);

/// Policy Bellman operator:
///   (T^pi f)(s,a) = R(s,a) + gamma * rho_{s,a}(f(., pi(.))).
QFunction apply_policy_bellman(const TabularMdp& m, const Policy& pi, const QFunction& q);

/// N-fold application of the policy value backup
///   (J_pi v)(s) = R(s, pi(s)) + gamma * rho_{s,pi(s)}(v)
/// to the zero vector; the N-step total discounted utility of pi.
VFunction finite_horizon_utility(const TabularMdp& m, const Policy& pi, int n_steps);

}  // namespace ermdp
