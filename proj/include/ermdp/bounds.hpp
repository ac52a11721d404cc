#pragma once

#include <cstdint>
#include <optional>

#include "ermdp/errors.hpp"

namespace ermdp {

enum class BoundKind { ub_value, ub_policy, lb_value, lb_policy };

/// Appendix constants of the lower-bound theorems.
inline constexpr double kLbValueC1 = 4096.0;
inline constexpr double kLbPolicyC1 = 1600.0;
inline constexpr double kLbC2 = 32.0;

/// Exact representation cutoff: totals are materialized only while
/// log10(T) <= 18.6 (about 2^62 samples); beyond that only the log survives.
inline constexpr double kBoundLog10Cutoff = 18.6;

struct BoundInputs {
    long long S = 0;
    long long A = 0;
    double gamma = 0.0;
    double beta = 0.0;
    double eps = 0.0;
    double delta = 0.0;
};

/// Result of a sample-complexity calculator. All arithmetic happens in log
/// space, so extreme (gamma, beta) never abort; `total` is the ceiled sample
/// count when representable and empty otherwise.
struct BoundReport {
    BoundKind kind;
    BoundInputs inputs;
    double log10_total = 0.0;
    std::optional<long long> total;
    /// ub_policy only: 1 if the gamma^2/(1-gamma)^2 branch of the min won,
    /// 2 if the policy-count branch did (ties go to 2).
    std::optional<int> min_branch;
    /// Lower bounds only: the appendix constants used.
    std::optional<double> c1, c2;
};

/// Samples sufficient for (eps,delta)-value-correctness:
///   T >= 2 S A gamma^2 / (eps^2 (1-gamma)^2) * L^2 * log(SA/delta),
/// with L = (e^{|beta|/(1-gamma)} - 1)/|beta| (limit 1/(1-gamma) at beta=0).
BoundReport ub_value_samples(long long S, long long A, double gamma, double beta, double eps,
                             double delta);

/// Samples sufficient for (eps,delta)-policy-correctness:
///   T >= 9 S A gamma^2 / (eps^2 (1-gamma)^2) * L^2 *
///        min{ gamma^2/(1-gamma)^2 log(4SA/delta), log(4SA|Pi|/delta) }.
/// log_policy_count defaults to the worst case log|Pi| = S log A.
BoundReport ub_policy_samples(long long S, long long A, double gamma, double beta, double eps,
                              double delta,
                              std::optional<double> log_policy_count = std::nullopt);

/// Worst-case lower bound for value learning, with the explicit constants
/// c1 = 4096, c2 = 32:
///   T = (S-2) A / c1 * gamma^2/eps^2 * (e^{|beta|/(1-gamma)} - 3)/beta^2
///       * log((S-2) A / (c2 delta)).
/// S and A are the constructed MDP's total state and action counts (the two
/// absorbing states are included in S). Requires delta in (0, 1/4),
/// eps < (1/40)(gamma/|beta|)(1 - e^{-|beta|/(1-gamma)}), and
/// |beta| > (1-gamma) log 3 (otherwise the bound is vacuous).
BoundReport lb_value_samples(long long S, long long A, double gamma, double beta, double eps,
                             double delta);

/// Worst-case lower bound for policy learning (c1 = 1600, c2 = 32):
///   T = (S-2)(A-1) / c1 * log((S-2)/(c2 delta)) * gamma^2/eps^2
///       * (e^{|beta|/(1-gamma)} - 3)/beta^2,
/// valid for eps < (gamma/(50|beta|))(1 - e^{-|beta|/(1-gamma)}).
BoundReport lb_policy_samples(long long S, long long A, double gamma, double beta, double eps,
                              double delta);

/// Q-value smoothness coefficient under transition perturbation:
///   xi = gamma / ((1-gamma)|beta|) * e^{|beta|/(1-gamma)}.
/// With log_space the natural log of xi is returned instead (xi itself
/// overflows once |beta|/(1-gamma) exceeds ~700). Throws BetaZero at beta=0.
double smoothness_coefficient(double gamma, double beta, bool log_space = false);

/// Smallest per-pair sample count N strictly exceeding
///   (1/(2 tau^2)) (1 - e^{-|beta|/(1-gamma)})^2 log(2SA/delta),
/// which makes the weighted model deviation stay below tau for all pairs
/// with probability >= 1-delta. Never below 1.
long long hoeffding_sample_size(long long S, long long A, double gamma, double beta, double tau,
                                double delta);

}  // namespace ermdp
