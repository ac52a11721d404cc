#include "ermdp/risk.hpp"

#include <cmath>

namespace ermdp {

namespace {

double erm_rho_unchecked(std::span<const double> probs, std::span<const double> values,
                         double beta) {
    if (beta == 0.0) {
        double mean = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) mean += probs[i] * values[i];
        return mean;
    }
    // Shift by the extremal value over the support so exponents are <= 0.
    bool found = false;
    double shift = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        if (!found || (beta > 0.0 ? values[i] < shift : values[i] > shift)) shift = values[i];
        found = true;
    }
    if (!found) return 0.0;
    // sum_i p_i e^{-beta (x_i - shift)} accumulated as mass + acc with acc
    // the expm1 deviation from the total mass. Normalizing by the mass makes
    // the result the ERM of the distribution the row approximates; without
    // it the row's ~1e-16 summation error would be amplified by 1/beta.
    double mass = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        mass += probs[i];
        acc += probs[i] * std::expm1(-beta * (values[i] - shift));
    }
    return shift - std::log1p(acc / mass) / beta;
}

}  // namespace

double erm_rho(std::span<const double> probs, std::span<const double> values, double beta) {
    return erm_rho_unchecked(probs, values, beta);
}

double erm_rho(const Distribution& d, double beta) {
    if (d.probs.size() != d.support_values.size() || d.probs.empty())
        throw InvalidDistribution("probs and support_values must be nonempty and equal-length");
    double sum = 0.0;
    for (double p : d.probs) {
        if (!std::isfinite(p) || p < 0.0)
            throw InvalidDistribution("probabilities must be finite and nonnegative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance)
        throw InvalidDistribution("probabilities sum to " + std::to_string(sum));
    for (double v : d.support_values)
        if (!std::isfinite(v)) throw InvalidDistribution("support values must be finite");
    return erm_rho_unchecked(d.probs, d.support_values, beta);
}

double rho_sa(const TabularMdp& m, int s, int a, const VFunction& v) {
    if (s < 0 || s >= m.num_states() || a < 0 || a >= m.num_actions())
        throw IndexOutOfRange("state or action index out of range");
    if (static_cast<int>(v.values.size()) != m.num_states())
        throw ShapeMismatch("value vector length does not match num_states");
    return erm_rho_unchecked(m.transition_row(s, a), v.values, m.beta());
}

QFunction apply_optimal_bellman(const TabularMdp& m, const QFunction& q) {
    if (q.num_states != m.num_states() || q.num_actions != m.num_actions())
        throw ShapeMismatch("Q table shape does not match the model");
    const VFunction v = v_max_from_q(q);
    QFunction out = QFunction::zeros(m.num_states(), m.num_actions());
    for (int s = 0; s < m.num_states(); ++s)
        for (int a = 0; a < m.num_actions(); ++a)
            out.at(s, a) =
                m.reward(s, a) +
                m.gamma() * erm_rho_unchecked(m.transition_row(s, a), v.values, m.beta());
    return out;
}

QFunction apply_policy_bellman(const TabularMdp& m, const Policy& pi, const QFunction& q) {
    if (q.num_states != m.num_states() || q.num_actions != m.num_actions())
        throw ShapeMismatch("Q table shape does not match the model");
    const VFunction v = v_from_q_under_policy(q, pi);
    QFunction out = QFunction::zeros(m.num_states(), m.num_actions());
    for (int s = 0; s < m.num_states(); ++s)
        for (int a = 0; a < m.num_actions(); ++a)
            out.at(s, a) =
                m.reward(s, a) +
                m.gamma() * erm_rho_unchecked(m.transition_row(s, a), v.values, m.beta());
    return out;
}

VFunction finite_horizon_utility(const TabularMdp& m, const Policy& pi, int n_steps) {
    if (n_steps < 1) throw NonPositiveEps("n_steps must be positive");
    if (static_cast<int>(pi.actions.size()) != m.num_states())
        throw ShapeMismatch("policy length does not match num_states");
    for (int a : pi.actions)
        if (a < 0 || a >= m.num_actions()) throw IndexOutOfRange("policy action out of range");
    VFunction v = VFunction::zeros(m.num_states());
    VFunction next = VFunction::zeros(m.num_states());
    for (int step = 0; step < n_steps; ++step) {
        for (int s = 0; s < m.num_states(); ++s) {
            const int a = pi.actions[s];
            next.values[s] =
                m.reward(s, a) +
                m.gamma() * erm_rho_unchecked(m.transition_row(s, a), v.values, m.beta());
        }
        std::swap(v, next);
    }
    return v;
}

}  // namespace ermdp
