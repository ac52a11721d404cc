#include "ermdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace ermdp {

void validate_mdp(int num_states, int num_actions, std::span<const double> transitions,
                  std::span<const double> rewards, double gamma, double beta) {
    if (num_states < 1 || num_actions < 1)
        throw ShapeMismatch("num_states and num_actions must be positive");
    const auto pairs = static_cast<std::size_t>(num_states) * num_actions;
    if (transitions.size() != pairs * num_states)
        throw ShapeMismatch("transition tensor has wrong size");
    if (rewards.size() != pairs) throw ShapeMismatch("reward matrix has wrong size");

    for (int s = 0; s < num_states; ++s) {
        for (int a = 0; a < num_actions; ++a) {
            const double* row = transitions.data() + (static_cast<std::size_t>(s) * num_actions + a) * num_states;
            double sum = 0.0;
            for (int s2 = 0; s2 < num_states; ++s2) {
                const double p = row[s2];
                if (!std::isfinite(p) || p < 0.0 || p > 1.0)
                    throw RowNotStochastic(s, a, "entry " + std::to_string(p) + " at s'=" + std::to_string(s2));
                sum += p;
            }
            if (std::abs(sum - 1.0) > kRowSumTolerance)
                throw RowNotStochastic(s, a, "row sums to " + std::to_string(sum));
        }
    }
    for (int s = 0; s < num_states; ++s)
        for (int a = 0; a < num_actions; ++a) {
            const double r = rewards[static_cast<std::size_t>(s) * num_actions + a];
            if (!std::isfinite(r) || r < 0.0 || r > 1.0) throw RewardOutOfRange(s, a, r);
        }
    if (!std::isfinite(gamma) || gamma <= 0.0 || gamma >= 1.0) throw GammaOutOfRange(gamma);
    if (!std::isfinite(beta)) throw NonFiniteEntry("risk parameter beta is not finite");
}

void validate_mdp(const TabularMdp& m) {
    validate_mdp(m.num_states(), m.num_actions(), m.transitions(), m.rewards(), m.gamma(),
                 m.beta());
}

TabularMdp::TabularMdp(int num_states, int num_actions, std::vector<double> transitions,
                       std::vector<double> rewards, double gamma, double beta)
    : num_states_(num_states),
      num_actions_(num_actions),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)),
      gamma_(gamma),
      beta_(beta) {
    validate_mdp(num_states_, num_actions_, transitions_, rewards_, gamma_, beta_);
    // Renormalize rows that passed validation but are off by rounding noise.
    for (std::size_t z = 0; z < static_cast<std::size_t>(num_states_) * num_actions_; ++z) {
        double* row = transitions_.data() + z * num_states_;
        double sum = 0.0;
        for (int s2 = 0; s2 < num_states_; ++s2) sum += row[s2];
        if (sum != 1.0)
            for (int s2 = 0; s2 < num_states_; ++s2) row[s2] /= sum;
    }
}

TabularMdp TabularMdp::with_beta(double beta) const {
    return TabularMdp(num_states_, num_actions_, transitions_, rewards_, gamma_, beta);
}

TabularMdp TabularMdp::with_transitions(std::vector<double> transitions) const {
    return TabularMdp(num_states_, num_actions_, std::move(transitions), rewards_, gamma_,
                      beta_);
}

Policy greedy_from_q(const QFunction& q) {
    for (double v : q.values)
        if (!std::isfinite(v)) throw NonFiniteEntry("Q table contains a non-finite entry");
    Policy pi;
    pi.actions.resize(q.num_states);
    for (int s = 0; s < q.num_states; ++s) {
        int best = 0;
        double best_value = q.at(s, 0);
        for (int a = 1; a < q.num_actions; ++a)
            if (q.at(s, a) > best_value) {
                best_value = q.at(s, a);
                best = a;
            }
        pi.actions[s] = best;
    }
    return pi;
}

double sup_norm_distance(const QFunction& x, const QFunction& y) {
    if (x.num_states != y.num_states || x.num_actions != y.num_actions)
        throw ShapeMismatch("Q tables have different shapes");
    double d = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i)
        d = std::max(d, std::abs(x.values[i] - y.values[i]));
    return d;
}

double sup_norm_distance(const VFunction& x, const VFunction& y) {
    if (x.values.size() != y.values.size())
        throw ShapeMismatch("value vectors have different lengths");
    double d = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i)
        d = std::max(d, std::abs(x.values[i] - y.values[i]));
    return d;
}

VFunction v_max_from_q(const QFunction& q) {
    VFunction v = VFunction::zeros(q.num_states);
    for (int s = 0; s < q.num_states; ++s) {
        double best = q.at(s, 0);
        for (int a = 1; a < q.num_actions; ++a) best = std::max(best, q.at(s, a));
        v.values[s] = best;
    }
    return v;
}

VFunction v_from_q_under_policy(const QFunction& q, const Policy& pi) {
    if (static_cast<int>(pi.actions.size()) != q.num_states)
        throw ShapeMismatch("policy length does not match Q table");
    VFunction v = VFunction::zeros(q.num_states);
    for (int s = 0; s < q.num_states; ++s) {
        const int a = pi.actions[s];
        if (a < 0 || a >= q.num_actions) throw IndexOutOfRange("policy action out of range");
        v.values[s] = q.at(s, a);
    }
    return v;
}

RewardRescaling rescale_to_unit_rewards(int num_states, int num_actions,
                                        std::vector<double> transitions,
                                        std::span<const double> rewards, double gamma,
                                        double beta) {
    for (double r : rewards)
        if (!std::isfinite(r)) throw NonFiniteEntry("reward matrix contains a non-finite entry");
    const auto [lo_it, hi_it] = std::minmax_element(rewards.begin(), rewards.end());
    const double r_min = *lo_it;
    const double width = *hi_it - r_min;
    std::vector<double> unit(rewards.size(), 0.0);
    if (width > 0.0)
        for (std::size_t i = 0; i < rewards.size(); ++i) unit[i] = (rewards[i] - r_min) / width;
    const double beta_scaled = width > 0.0 ? beta * width : beta;
    return RewardRescaling{
        TabularMdp(num_states, num_actions, std::move(transitions), std::move(unit), gamma,
                   beta_scaled),
        width, r_min / (1.0 - gamma)};
}

namespace {

nlohmann::json mdp_to_json(const TabularMdp& m) {
    nlohmann::json rewards = nlohmann::json::array();
    nlohmann::json transitions = nlohmann::json::array();
    for (int s = 0; s < m.num_states(); ++s) {
        nlohmann::json reward_row = nlohmann::json::array();
        nlohmann::json action_rows = nlohmann::json::array();
        for (int a = 0; a < m.num_actions(); ++a) {
            reward_row.push_back(m.reward(s, a));
            auto row = m.transition_row(s, a);
            action_rows.push_back(std::vector<double>(row.begin(), row.end()));
        }
        rewards.push_back(std::move(reward_row));
        transitions.push_back(std::move(action_rows));
    }
    return nlohmann::json{{"num_states", m.num_states()},
                          {"num_actions", m.num_actions()},
                          {"gamma", m.gamma()},
                          {"beta", m.beta()},
                          {"rewards", std::move(rewards)},
                          {"transitions", std::move(transitions)}};
}

TabularMdp mdp_from_json(const nlohmann::json& j) {
    const int S = j.at("num_states").get<int>();
    const int A = j.at("num_actions").get<int>();
    if (S < 1 || A < 1) throw ConfigError("num_states and num_actions must be positive");
    const auto& jr = j.at("rewards");
    const auto& jt = j.at("transitions");
    if (static_cast<int>(jr.size()) != S || static_cast<int>(jt.size()) != S)
        throw ConfigError("rewards/transitions outer dimension must equal num_states");
    std::vector<double> rewards;
    std::vector<double> transitions;
    rewards.reserve(static_cast<std::size_t>(S) * A);
    transitions.reserve(static_cast<std::size_t>(S) * A * S);
    for (int s = 0; s < S; ++s) {
        if (static_cast<int>(jr[s].size()) != A || static_cast<int>(jt[s].size()) != A)
            throw ConfigError("rewards/transitions inner dimension must equal num_actions");
        for (int a = 0; a < A; ++a) {
            rewards.push_back(jr[s][a].get<double>());
            const auto& row = jt[s][a];
            if (static_cast<int>(row.size()) != S)
                throw ConfigError("transition row length must equal num_states");
            for (int s2 = 0; s2 < S; ++s2) transitions.push_back(row[s2].get<double>());
        }
    }
    return TabularMdp(S, A, std::move(transitions), std::move(rewards),
                      j.at("gamma").get<double>(), j.at("beta").get<double>());
}

}  // namespace

std::string TabularMdp::to_json_string() const { return mdp_to_json(*this).dump(2); }

TabularMdp TabularMdp::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed MDP JSON: ") + e.what());
    }
    try {
        return mdp_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed MDP JSON: ") + e.what());
    }
}

TabularMdp TabularMdp::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_string(buffer.str());
}

void TabularMdp::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << to_json_string() << '\n';
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace ermdp
