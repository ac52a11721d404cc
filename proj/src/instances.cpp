#include "ermdp/instances.hpp"

#include <cmath>

#include "ermdp/risk.hpp"

namespace ermdp {

TabularMdp build_riverswim(const RiverSwimConfig& cfg) {
    const int L = cfg.num_stream_states;
    if (L < 2) throw ConfigError("RiverSwim needs at least 2 states");
    const double triple = cfg.p_right_success + cfg.p_right_stay + cfg.p_right_back;
    if (cfg.p_right_success < 0.0 || cfg.p_right_stay < 0.0 || cfg.p_right_back < 0.0 ||
        std::abs(triple - 1.0) > kRowSumTolerance)
        throw ConfigError("right-action probability triple must be nonnegative and sum to 1");

    constexpr int kLeft = 0, kRight = 1;
    const int A = 2;
    std::vector<double> transitions(static_cast<std::size_t>(L) * A * L, 0.0);
    std::vector<double> rewards(static_cast<std::size_t>(L) * A, 0.0);
    auto p = [&](int s, int a, int s2) -> double& {
        return transitions[(static_cast<std::size_t>(s) * A + a) * L + s2];
    };
    for (int s = 0; s < L; ++s) {
        p(s, kLeft, std::max(s - 1, 0)) = 1.0;
        if (s + 1 < L)
            p(s, kRight, s + 1) += cfg.p_right_success;
        else
            p(s, kRight, s) += cfg.p_right_success;
        p(s, kRight, s) += cfg.p_right_stay;
        if (s - 1 >= 0)
            p(s, kRight, s - 1) += cfg.p_right_back;
        else
            p(s, kRight, s) += cfg.p_right_back;
    }
    rewards[static_cast<std::size_t>(0) * A + kLeft] = cfg.left_reward;
    rewards[static_cast<std::size_t>(L - 1) * A + kRight] = cfg.right_reward;
    return TabularMdp(L, A, std::move(transitions), std::move(rewards), cfg.gamma, cfg.beta);
}

namespace {

double horizon_exponent(double gamma, double beta) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw GammaOutOfRange(gamma);
    return std::abs(beta) / (1.0 - gamma);
}

}  // namespace

double hard_p(double gamma, double beta) {
    const double b = horizon_exponent(gamma, beta);
    if (beta == 0.0) throw BetaZero("hard instances are defined for beta != 0");
    return beta > 0.0 ? -std::expm1(-b) : std::exp(-b);
}

double hard_p_complement(double gamma, double beta) {
    const double b = horizon_exponent(gamma, beta);
    if (beta == 0.0) throw BetaZero("hard instances are defined for beta != 0");
    return beta > 0.0 ? std::exp(-b) : -std::expm1(-b);
}

double hard_value_eps_cap(double gamma, double beta) {
    const double b = horizon_exponent(gamma, beta);
    if (beta == 0.0) throw BetaZero("hard instances are defined for beta != 0");
    return (gamma / (40.0 * std::abs(beta))) * (-std::expm1(-b));
}

double hard_policy_eps_cap(double gamma, double beta) {
    const double b = horizon_exponent(gamma, beta);
    if (beta == 0.0) throw BetaZero("hard instances are defined for beta != 0");
    return (gamma / (50.0 * std::abs(beta))) * (-std::expm1(-b));
}

namespace {

// c eps |beta| / (gamma (e^b - 1)) evaluated as a product of representable
// factors: 1/(e^b - 1) = e^{-b}/(1 - e^{-b}).
double hard_alpha(double c, double gamma, double beta, double eps) {
    const double b = horizon_exponent(gamma, beta);
    return c * eps * std::abs(beta) / gamma * std::exp(-b) / (-std::expm1(-b));
}

}  // namespace

double hard_value_alpha(double gamma, double beta, double eps) {
    return hard_alpha(8.0, gamma, beta, eps);
}

double hard_policy_alpha(double gamma, double beta, double eps) {
    return hard_alpha(5.0, gamma, beta, eps);
}

TabularMdp build_two_outcome_mdp(int S, int A, double gamma, double beta,
                                 std::span<const double> q) {
    if (S < 1 || A < 1) throw ShapeMismatch("need at least one choice state and action");
    if (static_cast<int>(q.size()) != S * A)
        throw ShapeMismatch("q must have one entry per choice pair");
    const int total = S + 2;
    const int good = S, bad = S + 1;
    std::vector<double> transitions(static_cast<std::size_t>(total) * A * total, 0.0);
    std::vector<double> rewards(static_cast<std::size_t>(total) * A, 0.0);
    auto p = [&](int s, int a, int s2) -> double& {
        return transitions[(static_cast<std::size_t>(s) * A + a) * total + s2];
    };
    for (int i = 0; i < S * A; ++i) {
        const int s = i % S;
        const int a = i / S;
        if (!(q[i] >= 0.0 && q[i] <= 1.0))
            throw ProbabilityOverflow("q[" + std::to_string(i) + "] outside [0,1]");
        p(s, a, good) = q[i];
        p(s, a, bad) = 1.0 - q[i];
    }
    for (int a = 0; a < A; ++a) {
        p(good, a, good) = 1.0;
        p(bad, a, bad) = 1.0;
        rewards[static_cast<std::size_t>(good) * A + a] = 1.0;
    }
    return TabularMdp(total, A, std::move(transitions), std::move(rewards), gamma, beta);
}

std::pair<TabularMdp, HardInstanceParams> build_hard_value_instance(int S, int A, double gamma,
                                                                    double beta, double eps,
                                                                    bool flipped,
                                                                    int flip_index) {
    if (S < 1 || A < 1) throw ShapeMismatch("need at least one choice state and action");
    const double cap = hard_value_eps_cap(gamma, beta);
    if (!(eps > 0.0) || eps >= cap) throw EpsOutOfRange(eps, cap);
    const double p = hard_p(gamma, beta);
    const double complement = hard_p_complement(gamma, beta);
    const double alpha = hard_value_alpha(gamma, beta, eps);
    if (p + alpha > 1.0) throw ProbabilityOverflow("p + alpha exceeds 1");

    HardInstanceParams params;
    params.kind = HardKind::value;
    params.gamma = gamma;
    params.beta = beta;
    params.eps = eps;
    params.p = p;
    params.one_minus_p = complement;
    params.alpha = alpha;
    params.num_choice_states = S;
    params.num_candidate_actions = A;
    params.good_state = S;
    params.bad_state = S + 1;

    std::vector<double> q(static_cast<std::size_t>(S) * A, p);
    if (flipped) {
        if (flip_index < 0 || flip_index >= S * A)
            throw IndexOutOfRange("flip_index outside [0, S*A)");
        params.flip_index = flip_index;
        q[flip_index] = p + alpha;
    }
    return {build_two_outcome_mdp(S, A, gamma, beta, q), std::move(params)};
}

double closed_form_hard_q(double q_i, double gamma, double beta) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw GammaOutOfRange(gamma);
    if (!(q_i >= 0.0 && q_i <= 1.0)) throw ProbabilityOverflow("q_i outside [0,1]");
    if (beta == 0.0) return gamma * q_i / (1.0 - gamma);
    const double atoms[2] = {1.0 / (1.0 - gamma), 0.0};
    const double probs[2] = {q_i, 1.0 - q_i};
    return gamma * erm_rho(std::span<const double>(probs, 2), std::span<const double>(atoms, 2),
                           beta);
}

SeparationGap separation_gap(const HardInstanceParams& params) {
    if (params.kind != HardKind::value)
        throw ConfigError("separation_gap applies to value-kind instances");
    const double gamma = params.gamma;
    const double beta = params.beta;
    const double alpha = params.alpha;
    double gap;
    if (beta == 0.0) {
        gap = gamma * alpha / (1.0 - gamma);
    } else if (beta > 0.0) {
        // Q(q) = -(gamma/beta) log A(q), A(q) = q e^{-b} + (1-q); the gap is
        // -(gamma/beta) log1p(-alpha (1-e^{-b}) / A(p)), which stays accurate
        // after p itself has rounded to 1.
        const double b = beta / (1.0 - gamma);
        const double down = std::exp(-b);
        const double base = params.p * down + params.one_minus_p;
        gap = -(gamma / beta) * std::log1p(-alpha * (-std::expm1(-b)) / base);
    } else {
        // Q(q) = (gamma/|beta|) log A(q), A(q) = q e^{b} + (1-q) with p ~ e^{-b};
        // p e^b goes through logs so b beyond the overflow threshold survives.
        const double b = -beta / (1.0 - gamma);
        const double scaled =
            params.p > 0.0 ? std::exp(std::log(params.p) + b) : 0.0;
        const double base = scaled + params.one_minus_p;
        double shift;  // alpha (e^b - 1)
        if (b <= 700.0)
            shift = alpha * std::expm1(b);
        else
            shift = alpha > 0.0 ? std::exp(std::log(alpha) + b + std::log1p(-std::exp(-b)))
                                : 0.0;
        gap = (gamma / -beta) * std::log1p(shift / base);
    }
    return SeparationGap{gap, gap > 2.0 * params.eps};
}

std::pair<TabularMdp, HardInstanceParams> build_hard_policy_instance(
    int S, int A, double gamma, double beta, double eps,
    const std::vector<int>& per_state_hypothesis) {
    if (S < 1 || A < 1) throw ShapeMismatch("need at least one choice state and one candidate");
    if (static_cast<int>(per_state_hypothesis.size()) != S)
        throw ShapeMismatch("one hypothesis selection per choice state required");
    const double cap = hard_policy_eps_cap(gamma, beta);
    if (!(eps > 0.0) || eps >= cap) throw EpsOutOfRange(eps, cap);
    const double p = hard_p(gamma, beta);
    const double alpha = hard_policy_alpha(gamma, beta, eps);
    if (p + 2.0 * alpha > 1.0) throw ProbabilityOverflow("p + 2 alpha exceeds 1");

    HardInstanceParams params;
    params.kind = HardKind::policy;
    params.gamma = gamma;
    params.beta = beta;
    params.eps = eps;
    params.p = p;
    params.one_minus_p = hard_p_complement(gamma, beta);
    params.alpha = alpha;
    params.num_choice_states = S;
    params.num_candidate_actions = A;
    params.good_state = S;
    params.bad_state = S + 1;
    params.per_state_hypothesis = per_state_hypothesis;

    const int total_actions = A + 1;  // a0 plus A candidates
    const int total = S + 2;
    const int good = S, bad = S + 1;
    std::vector<double> transitions(
        static_cast<std::size_t>(total) * total_actions * total, 0.0);
    std::vector<double> rewards(static_cast<std::size_t>(total) * total_actions, 0.0);
    auto p_at = [&](int s, int a, int s2) -> double& {
        return transitions[(static_cast<std::size_t>(s) * total_actions + a) * total + s2];
    };
    for (int s = 0; s < S; ++s) {
        const int l = per_state_hypothesis[s];
        if (l < 0 || l > A) throw IndexOutOfRange("hypothesis index outside [0, A]");
        for (int a = 0; a < total_actions; ++a) {
            double q = p;
            if (a == 0)
                q = p + alpha;
            else if (l != 0 && a == l)
                q = p + 2.0 * alpha;
            p_at(s, a, good) = q;
            p_at(s, a, bad) = 1.0 - q;
        }
    }
    for (int a = 0; a < total_actions; ++a) {
        p_at(good, a, good) = 1.0;
        p_at(bad, a, bad) = 1.0;
        rewards[static_cast<std::size_t>(good) * total_actions + a] = 1.0;
    }
    return {TabularMdp(total, total_actions, std::move(transitions), std::move(rewards), gamma,
                       beta),
            std::move(params)};
}

std::pair<TabularMdp, HardInstanceParams> build_hard_policy_instance(int S, int A, double gamma,
                                                                     double beta, double eps,
                                                                     int hypothesis) {
    return build_hard_policy_instance(S, A, gamma, beta, eps,
                                      std::vector<int>(S, hypothesis));
}

}  // namespace ermdp
