#pragma once

#include <utility>
#include <vector>

#include "ermdp/mdp.hpp"

namespace ermdp {

/// L-state two-action chain. Action 0 ("left") moves one state toward state
/// 0 deterministically; action 1 ("right") moves right / stays / slips back
/// with the configured probability triple. Rewards are zero except
/// R(0, left) = left_reward and R(L-1, right) = right_reward.
/// At the boundaries the out-of-range mass of the right action folds into
/// "stay": state 0 gains the slip-back mass, state L-1 the move-right mass.
struct RiverSwimConfig {
    int num_stream_states = 8;
    double gamma = 0.95;
    double beta = 0.0;
    double left_reward = 0.05;
    double right_reward = 1.0;
    double p_right_success = 0.3;
    double p_right_stay = 0.6;
    double p_right_back = 0.1;
};

TabularMdp build_riverswim(const RiverSwimConfig& cfg);

enum class HardKind { value, policy };

/// Parameter record of a hard-to-learn instance, kept at full precision even
/// where the transition tensor cannot resolve the perturbation (for
/// |beta|/(1-gamma) beyond ~36 the shift alpha drops below the double
/// resolution of probabilities near 1).
struct HardInstanceParams {
    HardKind kind = HardKind::value;
    double gamma = 0.0;
    double beta = 0.0;
    double eps = 0.0;
    double p = 0.0;            ///< base good-state probability
    double one_minus_p = 0.0;  ///< complement, computed directly (not as 1-p)
    double alpha = 0.0;        ///< hypothesis separation shift
    int num_choice_states = 0;
    int num_candidate_actions = 0;  ///< value kind: A; policy kind: candidates excluding a0
    int good_state = 0;
    int bad_state = 0;
    /// Value kind: flattened z index with q = p + alpha, or -1 under H0.
    int flip_index = -1;
    /// Policy kind: per-state selection, 0 = H0 and l >= 1 = H_l.
    std::vector<int> per_state_hypothesis;
};

/// Base probability of reaching the good absorbing state:
/// 1 - e^{-|beta|/(1-gamma)} for beta > 0, e^{-|beta|/(1-gamma)} for beta < 0.
double hard_p(double gamma, double beta);
double hard_p_complement(double gamma, double beta);

/// Admissible eps range caps of the two instance families.
double hard_value_eps_cap(double gamma, double beta);   // (1/40)(gamma/|beta|)(1-e^{-b})
double hard_policy_eps_cap(double gamma, double beta);  // (gamma/(50|beta|))(1-e^{-b})

/// Hypothesis separation shifts.
double hard_value_alpha(double gamma, double beta, double eps);   // 8 eps |beta| / (gamma (e^b - 1))
double hard_policy_alpha(double gamma, double beta, double eps);  // 5 eps |beta| / (gamma (e^b - 1))

/// Two-absorbing-outcome MDP: choice states 0..S-1 with A actions, good
/// state S (reward 1 under every action), bad state S+1 (reward 0), all
/// choice rewards zero. The pair z_i = (state i mod S, action i div S)
/// transitions to the good state with probability q[i] and to the bad state
/// otherwise. Optimal Q-values are available in closed form
/// (closed_form_hard_q).
TabularMdp build_two_outcome_mdp(int S, int A, double gamma, double beta,
                                 std::span<const double> q);

/// Hard value-learning instance: the two-outcome family with
/// q_i = p everywhere (H0) or q = p + alpha at one flipped z index (H1).
/// S counts choice states; the model has S + 2 states.
std::pair<TabularMdp, HardInstanceParams> build_hard_value_instance(int S, int A, double gamma,
                                                                    double beta, double eps,
                                                                    bool flipped,
                                                                    int flip_index = 0);

/// Optimal Q-value of a choice pair with good-state probability q_i:
///   Q(z) = -(gamma/beta) log(q_i e^{-beta/(1-gamma)} + 1 - q_i),
/// with the beta = 0 limit gamma q_i / (1-gamma). Exponent-shifted, so any
/// representable beta/(1-gamma) evaluates without overflow. The absorbing
/// states have Q = 1/(1-gamma) and 0.
double closed_form_hard_q(double q_i, double gamma, double beta);

struct SeparationGap {
    double gap;          ///< Q*(p + alpha) - Q*(p)
    bool exceeds_2eps;   ///< gap > 2 eps
};

/// Q-value separation between the flipped and base hypotheses of a value
/// instance. Evaluated in complement form, so the gap survives p rounding
/// to 1 at large |beta|/(1-gamma).
SeparationGap separation_gap(const HardInstanceParams& params);

/// Hard policy-learning instance: choice states 0..S-1, actions a0..aA
/// (A + 1 in total), two absorbing states. Every state gives
/// q(s, a0) = p + alpha; under H0 all candidates have q = p, under H_l
/// candidate a_l has q = p + 2 alpha. One hypothesis selection per state
/// (0 = H0, l in 1..A = H_l).
std::pair<TabularMdp, HardInstanceParams> build_hard_policy_instance(
    int S, int A, double gamma, double beta, double eps,
    const std::vector<int>& per_state_hypothesis);

/// Same hypothesis at every state.
std::pair<TabularMdp, HardInstanceParams> build_hard_policy_instance(int S, int A, double gamma,
                                                                     double beta, double eps,
                                                                     int hypothesis = 0);

}  // namespace ermdp
