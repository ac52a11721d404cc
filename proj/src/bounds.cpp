#include "ermdp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ermdp {

namespace {

constexpr double kLn10 = 2.302585092994045684;

void check_common(long long S, long long A, double gamma, double delta) {
    if (S < 1 || A < 1) throw ShapeMismatch("S and A must be at least 1");
    if (!(gamma > 0.0 && gamma < 1.0)) throw GammaOutOfRange(gamma);
    if (!(delta > 0.0 && delta < 1.0)) throw DeltaOutOfRange("delta must lie in (0,1)");
}

// log L with L = (e^{|beta|/(1-gamma)} - 1)/|beta|, or the beta -> 0 limit
// 1/(1-gamma). log(e^b - 1) = b + log1p(-e^{-b}) stays finite for any b > 0.
double log_coefficient(double gamma, double beta) {
    if (beta == 0.0) return -std::log(1.0 - gamma);
    const double b = std::abs(beta) / (1.0 - gamma);
    return b + std::log1p(-std::exp(-b)) - std::log(std::abs(beta));
}

// Fills log10_total and, when representable, the ceiled total (+1 when the
// real value is integral, keeping non-strict theorem inequalities strict).
void finish_report(BoundReport& report, double ln_total) {
    report.log10_total = ln_total / kLn10;
    if (report.log10_total <= kBoundLog10Cutoff) {
        const double value = std::exp(ln_total);
        const double nearest = std::round(value);
        double total;
        if (std::abs(value - nearest) <= 1e-9 * std::max(1.0, std::abs(value)))
            total = nearest + 1.0;
        else
            total = std::ceil(value);
        report.total = static_cast<long long>(total);
    }
}

}  // namespace

BoundReport ub_value_samples(long long S, long long A, double gamma, double beta, double eps,
                             double delta) {
    check_common(S, A, gamma, delta);
    if (!(eps > 0.0)) throw NonPositiveEps("eps must be positive");
    BoundReport report;
    report.kind = BoundKind::ub_value;
    report.inputs = {S, A, gamma, beta, eps, delta};
    const double ln_total = std::log(2.0) + std::log(static_cast<double>(S)) +
                            std::log(static_cast<double>(A)) + 2.0 * std::log(gamma) -
                            2.0 * std::log(eps) - 2.0 * std::log(1.0 - gamma) +
                            2.0 * log_coefficient(gamma, beta) +
                            std::log(std::log(static_cast<double>(S) * A / delta));
    finish_report(report, ln_total);
    return report;
}

BoundReport ub_policy_samples(long long S, long long A, double gamma, double beta, double eps,
                              double delta, std::optional<double> log_policy_count) {
    check_common(S, A, gamma, delta);
    if (!(eps > 0.0)) throw NonPositiveEps("eps must be positive");
    const double log_pi =
        log_policy_count.value_or(static_cast<double>(S) * std::log(static_cast<double>(A)));
    if (log_pi < 0.0) throw ConfigError("log_policy_count must be nonnegative");

    const double log_4sa_delta = std::log(4.0 * static_cast<double>(S) * A / delta);
    const double horizon_sq = (gamma / (1.0 - gamma)) * (gamma / (1.0 - gamma));
    const double branch1 = horizon_sq * log_4sa_delta;
    const double branch2 = log_4sa_delta + log_pi;

    BoundReport report;
    report.kind = BoundKind::ub_policy;
    report.inputs = {S, A, gamma, beta, eps, delta};
    report.min_branch = branch1 < branch2 ? 1 : 2;
    const double ln_total = std::log(9.0) + std::log(static_cast<double>(S)) +
                            std::log(static_cast<double>(A)) + 2.0 * std::log(gamma) -
                            2.0 * std::log(eps) - 2.0 * std::log(1.0 - gamma) +
                            2.0 * log_coefficient(gamma, beta) +
                            std::log(std::min(branch1, branch2));
    finish_report(report, ln_total);
    return report;
}

namespace {

// Shared validation and log-space core of the two lower bounds.
BoundReport lower_bound_report(BoundKind kind, long long S, long long A, double gamma,
                               double beta, double eps, double delta, double eps_cap_factor,
                               double c1, double ln_log_argument) {
    BoundReport report;
    report.kind = kind;
    report.inputs = {S, A, gamma, beta, eps, delta};
    report.c1 = c1;
    report.c2 = kLbC2;

    const double b = std::abs(beta) / (1.0 - gamma);
    // e^b - 3 <= 0 makes the bound meaningless.
    if (b <= std::log(3.0)) throw VacuousRegime("|beta| <= (1-gamma) log 3: bound is vacuous");
    const double cap = (gamma / (eps_cap_factor * std::abs(beta))) * (-std::expm1(-b));
    if (!(eps > 0.0) || eps >= cap) throw EpsOutOfRange(eps, cap);

    // log(e^b - 3) = b + log(1 - 3 e^{-b}).
    const double ln_exp_term = b + std::log1p(-3.0 * std::exp(-b));
    const double log_log = std::log(ln_log_argument);
    if (!(log_log > 0.0)) {
        // Degenerate tiny instance: the stated bound is nonpositive.
        report.log10_total = -std::numeric_limits<double>::infinity();
        report.total = 0;
        return report;
    }
    const double ln_total = -std::log(c1) + 2.0 * std::log(gamma) - 2.0 * std::log(eps) +
                            ln_exp_term - 2.0 * std::log(std::abs(beta)) + std::log(log_log) +
                            (kind == BoundKind::lb_value
                                 ? std::log(static_cast<double>(S - 2)) +
                                       std::log(static_cast<double>(A))
                                 : std::log(static_cast<double>(S - 2)) +
                                       std::log(static_cast<double>(A - 1)));
    finish_report(report, ln_total);
    return report;
}

}  // namespace

BoundReport lb_value_samples(long long S, long long A, double gamma, double beta, double eps,
                             double delta) {
    check_common(S, A, gamma, delta);
    if (S < 3) throw ShapeMismatch("lower-bound instances need S >= 3 (two absorbing states)");
    if (!(delta < 0.25)) throw DeltaOutOfRange("delta must lie in (0, 1/4)");
    const double log_argument = static_cast<double>(S - 2) * A / (kLbC2 * delta);
    return lower_bound_report(BoundKind::lb_value, S, A, gamma, beta, eps, delta, 40.0,
                              kLbValueC1, log_argument);
}

BoundReport lb_policy_samples(long long S, long long A, double gamma, double beta, double eps,
                              double delta) {
    check_common(S, A, gamma, delta);
    if (S < 3) throw ShapeMismatch("lower-bound instances need S >= 3 (two absorbing states)");
    if (A < 2) throw ShapeMismatch("policy lower bound needs A >= 2 (anchor action a0)");
    if (!(delta < 0.25)) throw DeltaOutOfRange("delta must lie in (0, 1/4)");
    const double log_argument = static_cast<double>(S - 2) / (kLbC2 * delta);
    return lower_bound_report(BoundKind::lb_policy, S, A, gamma, beta, eps, delta, 50.0,
                              kLbPolicyC1, log_argument);
}

double smoothness_coefficient(double gamma, double beta, bool log_space) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw GammaOutOfRange(gamma);
    if (beta == 0.0) throw BetaZero("smoothness coefficient is undefined at beta = 0");
    const double ln_xi = std::log(gamma) - std::log(1.0 - gamma) - std::log(std::abs(beta)) +
                         std::abs(beta) / (1.0 - gamma);
    return log_space ? ln_xi : std::exp(ln_xi);
}

long long hoeffding_sample_size(long long S, long long A, double gamma, double beta, double tau,
                                double delta) {
    check_common(S, A, gamma, delta);
    if (!(tau > 0.0)) throw NonPositiveEps("tau must be positive");
    const double b = std::abs(beta) / (1.0 - gamma);
    const double range = -std::expm1(-b);  // 1 - e^{-b}
    const double bound =
        range * range / (2.0 * tau * tau) * std::log(2.0 * static_cast<double>(S) * A / delta);
    if (bound >= 4.6e18) throw BoundOverflow(std::log10(bound));
    if (bound < 1.0) return 1;
    return static_cast<long long>(std::floor(bound)) + 1;
}

}  // namespace ermdp
