#pragma once

#include <span>
#include <string>
#include <vector>

#include "ermdp/errors.hpp"

namespace ermdp {

/// Tolerance on transition row sums: rows whose sum deviates from 1 by at
/// most this are renormalized on construction, larger deviations are
/// rejected.
inline constexpr double kRowSumTolerance = 1e-12;

/// State-action value table, row-major (s, a).
struct QFunction {
    int num_states = 0;
    int num_actions = 0;
    std::vector<double> values;

    static QFunction zeros(int num_states, int num_actions) {
        QFunction q;
        q.num_states = num_states;
        q.num_actions = num_actions;
        q.values.assign(static_cast<std::size_t>(num_states) * num_actions, 0.0);
        return q;
    }

    double& at(int s, int a) { return values[static_cast<std::size_t>(s) * num_actions + a]; }
    double at(int s, int a) const { return values[static_cast<std::size_t>(s) * num_actions + a]; }
};

/// State value vector.
struct VFunction {
    std::vector<double> values;

    static VFunction zeros(int num_states) {
        VFunction v;
        v.values.assign(num_states, 0.0);
        return v;
    }
};

/// Deterministic stationary policy: one action index per state.
struct Policy {
    std::vector<int> actions;
};

/// Finite discounted MDP with an entropic-risk parameter.
///
/// Invariants enforced at construction:
///   - every transition row (s,a,.) is a probability distribution
///     (entries in [0,1], sum 1 within kRowSumTolerance; rows within the
///     tolerance are renormalized);
///   - rewards lie in [0,1];
///   - gamma lies strictly inside (0,1).
///
/// beta = 0 selects the risk-neutral case (plain expectation backups);
/// beta > 0 is risk-averse, beta < 0 risk-seeking.
///
/// Instances are immutable after construction and safe to share read-only
/// across threads.
class TabularMdp {
  public:
    TabularMdp(int num_states, int num_actions, std::vector<double> transitions,
               std::vector<double> rewards, double gamma, double beta);

    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }
    double gamma() const { return gamma_; }
    double beta() const { return beta_; }

    double reward(int s, int a) const {
        return rewards_[static_cast<std::size_t>(s) * num_actions_ + a];
    }
    double transition(int s, int a, int s2) const { return transition_row(s, a)[s2]; }
    std::span<const double> transition_row(int s, int a) const {
        return {transitions_.data() +
                    (static_cast<std::size_t>(s) * num_actions_ + a) * num_states_,
                static_cast<std::size_t>(num_states_)};
    }

    const std::vector<double>& transitions() const { return transitions_; }
    const std::vector<double>& rewards() const { return rewards_; }

    /// Upper bound 1/(1-gamma) on any attainable value.
    double value_bound() const { return 1.0 / (1.0 - gamma_); }

    /// Copy of this model with a different risk parameter.
    TabularMdp with_beta(double beta) const;
    /// Copy of this model with a different transition tensor (same shape).
    TabularMdp with_transitions(std::vector<double> transitions) const;

    std::string to_json_string() const;
    static TabularMdp from_json_string(const std::string& text);
    static TabularMdp load(const std::string& path);
    void save(const std::string& path) const;

  private:
    int num_states_;
    int num_actions_;
    std::vector<double> transitions_;  // (s, a, s') flattened
    std::vector<double> rewards_;      // (s, a) flattened
    double gamma_;
    double beta_;
};

/// Checks all TabularMdp invariants on raw data; throws RowNotStochastic,
/// RewardOutOfRange, GammaOutOfRange or NonFiniteEntry identifying the first
/// violation. Returns normally iff the data describes a valid model.
void validate_mdp(int num_states, int num_actions, std::span<const double> transitions,
                  std::span<const double> rewards, double gamma, double beta);

/// Re-checks an already constructed model.
void validate_mdp(const TabularMdp& m);

/// Greedy policy from a Q table; ties broken by lowest action index.
/// Throws NonFiniteEntry if the table contains NaN or infinities.
Policy greedy_from_q(const QFunction& q);

/// Max-norm distance between two tables of identical shape.
double sup_norm_distance(const QFunction& x, const QFunction& y);
double sup_norm_distance(const VFunction& x, const VFunction& y);

/// V(s) = max_a q(s,a).
VFunction v_max_from_q(const QFunction& q);
/// V(s) = q(s, pi(s)).
VFunction v_from_q_under_policy(const QFunction& q, const Policy& pi);

/// Result of mapping a bounded-reward problem onto the unit reward range.
struct RewardRescaling {
    TabularMdp mdp;    ///< rewards in [0,1], risk parameter beta * width
    double scale;      ///< reward range width w = r_max - r_min
    double offset;     ///< r_min / (1 - gamma)
};

/// Maps an MDP with rewards in an arbitrary bounded range [r_min, r_max]
/// onto the equivalent unit-range model. Uses the identity
/// rho(w X; beta) = w rho(X; w beta) together with translation invariance:
/// the returned model has rewards (r - r_min)/w and risk parameter beta * w,
/// and values map back as V_original = scale * V + offset. With constant
/// rewards (w = 0) the normalized model has zero rewards and unchanged beta.
RewardRescaling rescale_to_unit_rewards(int num_states, int num_actions,
                                        std::vector<double> transitions,
                                        std::span<const double> rewards, double gamma,
                                        double beta);

}  // namespace ermdp
