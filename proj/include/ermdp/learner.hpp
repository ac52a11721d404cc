#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "ermdp/planner.hpp"
#include "ermdp/rng.hpp"

namespace ermdp {

enum class PlanningMode { value, policy };

/// Simulator access to an MDP: one next-state draw per query. Each
/// state-action pair owns its stream (stream_index = s*A + a of the base
/// seed), so results do not depend on query interleaving across pairs and
/// distinct pairs may be sampled concurrently. Queries on the same pair are
/// single-owner.
class GenerativeModel {
  public:
    GenerativeModel(TabularMdp underlying, std::uint64_t seed);

    /// Draws s' ~ P(.|s,a) from the underlying model.
    int sample(int s, int a);

    std::uint64_t total_samples() const { return count_.load(std::memory_order_relaxed); }
    std::uint64_t seed() const { return seed_; }

    /// The true model. The learning pipeline only reads S, A, R, gamma and
    /// beta from it; tests and the experiment harness use it as the oracle.
    const TabularMdp& underlying() const { return mdp_; }

  private:
    TabularMdp mdp_;
    std::uint64_t seed_;
    std::vector<SeededRng> streams_;  // one per (s,a)
    std::atomic<std::uint64_t> count_{0};
};

/// Visit counts from sampling every pair the same number of times, plus the
/// plug-in transition estimate p_hat = count/N (materialized on demand so
/// row sums stay exactly 1 in rational arithmetic).
struct EmpiricalModel {
    int num_states = 0;
    int num_actions = 0;
    long long samples_per_pair = 0;
    std::vector<std::int64_t> counts;  // (s, a, s') flattened

    std::int64_t count(int s, int a, int s2) const {
        return counts[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
    }
    double p_hat(int s, int a, int s2) const {
        return static_cast<double>(count(s, a, s2)) / static_cast<double>(samples_per_pair);
    }
    std::vector<double> p_hat_tensor() const;

    /// Empirical MDP sharing the base model's rewards, gamma and beta.
    TabularMdp empirical_mdp(const TabularMdp& base) const;
};

/// Draws n_per_pair samples from every state-action pair in lexicographic
/// (s, a) order and tallies them. Total model calls: n_per_pair * S * A.
EmpiricalModel estimate_model(GenerativeModel& g, long long n_per_pair);

struct LearnResult {
    PlanResult plan;       ///< RS-QVI output on the empirical MDP
    EmpiricalModel model;  ///< counts the plan was computed from
};

/// Model-based pipeline: estimate the transition model, then run RS-QVI on
/// the empirical MDP with the iteration count the requested mode's schedule
/// prescribes for eps.
LearnResult mb_rs_qvi(GenerativeModel& g, long long n_per_pair, double eps, PlanningMode mode);

struct SampleRequirement {
    long long n_per_pair = 0;
    long long total = 0;
};

/// Per-pair and total sample counts the selected upper-bound theorem
/// prescribes for (eps, delta) on this model's shape. Throws BoundOverflow
/// (carrying log10 of the total) when the bound exceeds 2^62 samples.
SampleRequirement required_samples_check(const TabularMdp& m, double eps, double delta,
                                         PlanningMode mode);

}  // namespace ermdp
