#include "ermdp/learner.hpp"

#include <cmath>

#include "ermdp/bounds.hpp"

namespace ermdp {

GenerativeModel::GenerativeModel(TabularMdp underlying, std::uint64_t seed)
    : mdp_(std::move(underlying)), seed_(seed) {
    const int S = mdp_.num_states();
    const int A = mdp_.num_actions();
    streams_.reserve(static_cast<std::size_t>(S) * A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
            streams_.emplace_back(seed_, static_cast<std::uint64_t>(s) * A + a);
}

int GenerativeModel::sample(int s, int a) {
    if (s < 0 || s >= mdp_.num_states() || a < 0 || a >= mdp_.num_actions())
        throw IndexOutOfRange("state or action index out of range");
    count_.fetch_add(1, std::memory_order_relaxed);
    auto& stream = streams_[static_cast<std::size_t>(s) * mdp_.num_actions() + a];
    return stream.sample_categorical(mdp_.transition_row(s, a));
}

std::vector<double> EmpiricalModel::p_hat_tensor() const {
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(samples_per_pair);
    return p;
}

TabularMdp EmpiricalModel::empirical_mdp(const TabularMdp& base) const {
    if (base.num_states() != num_states || base.num_actions() != num_actions)
        throw ShapeMismatch("base model shape does not match the counts");
    return base.with_transitions(p_hat_tensor());
}

EmpiricalModel estimate_model(GenerativeModel& g, long long n_per_pair) {
    if (n_per_pair < 1) throw NonPositiveEps("n_per_pair must be at least 1");
    const TabularMdp& m = g.underlying();
    EmpiricalModel model;
    model.num_states = m.num_states();
    model.num_actions = m.num_actions();
    model.samples_per_pair = n_per_pair;
    model.counts.assign(
        static_cast<std::size_t>(m.num_states()) * m.num_actions() * m.num_states(), 0);
    for (int s = 0; s < m.num_states(); ++s)
        for (int a = 0; a < m.num_actions(); ++a) {
            const std::size_t row =
                (static_cast<std::size_t>(s) * m.num_actions() + a) * m.num_states();
            for (long long i = 0; i < n_per_pair; ++i) ++model.counts[row + g.sample(s, a)];
        }
    return model;
}

LearnResult mb_rs_qvi(GenerativeModel& g, long long n_per_pair, double eps, PlanningMode mode) {
    EmpiricalModel model = estimate_model(g, n_per_pair);
    const TabularMdp empirical = model.empirical_mdp(g.underlying());
    const int k = mode == PlanningMode::value
                      ? iterations_for_value_eps(empirical.gamma(), eps)
                      : iterations_for_policy_eps(empirical.gamma(), eps);
    return LearnResult{rs_qvi(empirical, k), std::move(model)};
}

SampleRequirement required_samples_check(const TabularMdp& m, double eps, double delta,
                                         PlanningMode mode) {
    const BoundReport report =
        mode == PlanningMode::value
            ? ub_value_samples(m.num_states(), m.num_actions(), m.gamma(), m.beta(), eps, delta)
            : ub_policy_samples(m.num_states(), m.num_actions(), m.gamma(), m.beta(), eps,
                                delta);
    if (!report.total) throw BoundOverflow(report.log10_total);
    const long long pairs = static_cast<long long>(m.num_states()) * m.num_actions();
    return SampleRequirement{(*report.total + pairs - 1) / pairs, *report.total};
}

}  // namespace ermdp
