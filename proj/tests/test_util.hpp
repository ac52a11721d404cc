#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ermdp/mdp.hpp"
#include "ermdp/rng.hpp"

// Shared helpers and independent oracles for the test suites. Everything here
// deliberately avoids the library's ERM code paths so the checks stay
// two-sided.
namespace testutil {

using ermdp::Policy;
using ermdp::QFunction;
using ermdp::SeededRng;
using ermdp::TabularMdp;
using ermdp::VFunction;

/// Random MDP with Dirichlet(1) rows and uniform rewards.
inline TabularMdp random_mdp(SeededRng& rng, int S, int A, double gamma, double beta) {
    std::vector<double> transitions(static_cast<std::size_t>(S) * A * S);
    std::vector<double> rewards(static_cast<std::size_t>(S) * A);
    for (int z = 0; z < S * A; ++z) {
        double sum = 0.0;
        for (int s2 = 0; s2 < S; ++s2) {
            const double e = -std::log(1.0 - rng.next_unit());
            transitions[static_cast<std::size_t>(z) * S + s2] = e;
            sum += e;
        }
        for (int s2 = 0; s2 < S; ++s2) transitions[static_cast<std::size_t>(z) * S + s2] /= sum;
        rewards[z] = rng.next_unit();
    }
    return TabularMdp(S, A, std::move(transitions), std::move(rewards), gamma, beta);
}

inline QFunction random_q(SeededRng& rng, int S, int A, double lo, double hi) {
    QFunction q = QFunction::zeros(S, A);
    for (double& v : q.values) v = rng.next_in(lo, hi);
    return q;
}

inline VFunction random_v(SeededRng& rng, int S, double lo, double hi) {
    VFunction v = VFunction::zeros(S);
    for (double& x : v.values) x = rng.next_in(lo, hi);
    return v;
}

inline Policy random_policy(SeededRng& rng, int S, int A) {
    Policy pi;
    pi.actions.resize(S);
    for (int& a : pi.actions) a = rng.next_index(A);
    return pi;
}

/// Transition tensor with bounded additive noise, clipped and renormalized.
inline TabularMdp perturb_transitions(const TabularMdp& m, SeededRng& rng, double magnitude) {
    const int S = m.num_states(), A = m.num_actions();
    std::vector<double> p = m.transitions();
    for (int z = 0; z < S * A; ++z) {
        double sum = 0.0;
        for (int s2 = 0; s2 < S; ++s2) {
            double& entry = p[static_cast<std::size_t>(z) * S + s2];
            entry = std::max(0.0, entry + rng.next_in(-magnitude, magnitude));
            sum += entry;
        }
        for (int s2 = 0; s2 < S; ++s2) p[static_cast<std::size_t>(z) * S + s2] /= sum;
    }
    return m.with_transitions(std::move(p));
}

/// One plain risk-neutral backup (expectation over max), written directly
/// against the tensors. Oracle for every beta = 0 comparison.
inline QFunction neutral_qvi_step(const TabularMdp& m, const QFunction& q) {
    const int S = m.num_states(), A = m.num_actions();
    QFunction next = QFunction::zeros(S, A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            double acc = 0.0;
            const auto row = m.transition_row(s, a);
            for (int s2 = 0; s2 < S; ++s2) {
                double best = q.at(s2, 0);
                for (int a2 = 1; a2 < A; ++a2) best = std::max(best, q.at(s2, a2));
                acc += row[s2] * best;
            }
            next.at(s, a) = m.reward(s, a) + m.gamma() * acc;
        }
    return next;
}

inline QFunction neutral_qvi(const TabularMdp& m, int sweeps) {
    QFunction q = QFunction::zeros(m.num_states(), m.num_actions());
    for (int it = 0; it < sweeps; ++it) q = neutral_qvi_step(m, q);
    return q;
}

inline QFunction neutral_solve(const TabularMdp& m, double tol) {
    const double threshold = tol * (1.0 - m.gamma()) / m.gamma();
    QFunction q = QFunction::zeros(m.num_states(), m.num_actions());
    for (long long it = 0; it < 5'000'000; ++it) {
        QFunction next = neutral_qvi_step(m, q);
        const double delta = ermdp::sup_norm_distance(next, q);
        q = std::move(next);
        if (delta <= threshold) break;
    }
    return q;
}

/// max_{s,a} | sum_{s'} (P_a - P_b)(s'|s,a) w(s') |
inline double max_weighted_row_deviation(const TabularMdp& a, const TabularMdp& b,
                                         std::span<const double> weights) {
    double worst = 0.0;
    for (int s = 0; s < a.num_states(); ++s)
        for (int act = 0; act < a.num_actions(); ++act) {
            const auto ra = a.transition_row(s, act);
            const auto rb = b.transition_row(s, act);
            double acc = 0.0;
            for (int s2 = 0; s2 < a.num_states(); ++s2) acc += (ra[s2] - rb[s2]) * weights[s2];
            worst = std::max(worst, std::abs(acc));
        }
    return worst;
}

}  // namespace testutil
