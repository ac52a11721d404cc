#include "doctest.h"

#include <cmath>

#include "ermdp/risk.hpp"
#include "test_util.hpp"

using namespace ermdp;

namespace {

// Direct unshifted evaluation in extended precision; usable wherever the
// naive exponentials stay in range.
double naive_rho(const std::vector<double>& probs, const std::vector<double>& values,
                 double beta) {
    if (beta == 0.0) {
        long double mean = 0.0L;
        for (std::size_t i = 0; i < probs.size(); ++i)
            mean += static_cast<long double>(probs[i]) * values[i];
        return static_cast<double>(mean);
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < probs.size(); ++i)
        acc += static_cast<long double>(probs[i]) * std::exp(-static_cast<long double>(beta) * values[i]);
    return static_cast<double>(-std::log(acc) / beta);
}

Distribution coin() { return Distribution{{0.5, 0.5}, {0.0, 1.0}}; }

}  // namespace

TEST_CASE("erm_rho: constancy on single atoms is exact") {
    for (double beta : {-50.0, -1.0, -1e-8, 1e-8, 1.0, 50.0}) {
        CHECK(erm_rho(Distribution{{1.0}, {0.37}}, beta) == 0.37);
        CHECK(erm_rho(Distribution{{0.25, 0.75}, {100.0, 100.0}}, beta) == 100.0);
    }
}

TEST_CASE("erm_rho matches the high-precision evaluation of the fair coin") {
    // -log(0.5 (1 + e^{-1})) and its beta = -1 mirror.
    CHECK(erm_rho(coin(), 1.0) == doctest::Approx(0.37988549304172248).epsilon(1e-12));
    CHECK(erm_rho(coin(), -1.0) == doctest::Approx(0.62011450695827752).epsilon(1e-12));
    CHECK(erm_rho(coin(), 0.0) == doctest::Approx(0.5));
}

TEST_CASE("erm_rho agrees with the naive formula where that formula is stable") {
    SeededRng rng(2024, 0);
    for (int i = 0; i < 300; ++i) {
        const int n = 2 + rng.next_index(8);
        std::vector<double> p(n), v(n);
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            p[j] = -std::log(1.0 - rng.next_unit());
            sum += p[j];
            v[j] = rng.next_in(0.0, 5.0);
        }
        for (int j = 0; j < n; ++j) p[j] /= sum;
        const double beta = rng.next_in(-3.0, 3.0);
        const double got = erm_rho(Distribution{p, v}, beta);
        CHECK(got == doctest::Approx(naive_rho(p, v, beta)).epsilon(1e-11));
    }
}

TEST_CASE("erm_rho rejects invalid distributions") {
    CHECK_THROWS_AS(erm_rho(Distribution{{0.5, 0.6}, {0, 1}}, 1.0), InvalidDistribution);
    CHECK_THROWS_AS(erm_rho(Distribution{{-0.1, 1.1}, {0, 1}}, 1.0), InvalidDistribution);
    CHECK_THROWS_AS(erm_rho(Distribution{{1.0}, {0, 1}}, 1.0), InvalidDistribution);
    CHECK_THROWS_AS(erm_rho(Distribution{{}, {}}, 1.0), InvalidDistribution);
    CHECK_THROWS_AS(erm_rho(Distribution{{1.0}, {std::nan("")}}, 1.0), InvalidDistribution);
}

TEST_CASE("erm_rho stays finite for |beta| up to 50 and values up to 100") {
    SeededRng rng(7, 3);
    for (double beta : {-50.0, -10.0, 10.0, 50.0}) {
        for (int i = 0; i < 50; ++i) {
            std::vector<double> v{rng.next_in(0, 100), rng.next_in(0, 100), rng.next_in(0, 100)};
            const double r = erm_rho(Distribution{{0.2, 0.3, 0.5}, v}, beta);
            CHECK(std::isfinite(r));
            const double lo = std::min({v[0], v[1], v[2]});
            const double hi = std::max({v[0], v[1], v[2]});
            CHECK(r >= lo - 1e-9);
            CHECK(r <= hi + 1e-9);
        }
    }
}

TEST_CASE("erm_rho: monotonicity and the Jensen sides") {
    SeededRng rng(31, 0);
    for (int i = 0; i < 500; ++i) {
        const int n = 2 + rng.next_index(6);
        std::vector<double> p(n), v(n), w(n);
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            p[j] = -std::log(1.0 - rng.next_unit());
            sum += p[j];
            v[j] = rng.next_in(0.0, 10.0);
            w[j] = v[j] + rng.next_in(0.0, 2.0);  // v <= w entrywise
        }
        for (int j = 0; j < n; ++j) p[j] /= sum;
        const double beta = rng.next_in(-4.0, 4.0);
        CHECK(erm_rho(Distribution{p, v}, beta) <= erm_rho(Distribution{p, w}, beta) + 1e-12);

        double mean = 0.0;
        for (int j = 0; j < n; ++j) mean += p[j] * v[j];
        const double averse = erm_rho(Distribution{p, v}, std::abs(beta) + 0.1);
        const double seeking = erm_rho(Distribution{p, v}, -std::abs(beta) - 0.1);
        CHECK(averse <= mean + 1e-12);
        CHECK(seeking >= mean - 1e-12);
    }
}

TEST_CASE("erm_rho: risk-neutral continuity at beta -> 0") {
    SeededRng rng(55, 0);
    for (int i = 0; i < 200; ++i) {
        const int n = 2 + rng.next_index(6);
        std::vector<double> p(n), v(n);
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            p[j] = -std::log(1.0 - rng.next_unit());
            sum += p[j];
            v[j] = rng.next_in(0.0, 20.0);
        }
        for (int j = 0; j < n; ++j) p[j] /= sum;
        const double diff = std::abs(erm_rho(Distribution{p, v}, 1e-9) - erm_rho(Distribution{p, v}, 0.0));
        CHECK(diff < 1e-7);
    }
}

TEST_CASE("rho_sa: deterministic transitions return the next value exactly") {
    TabularMdp m(2, 1, {0, 1, 1, 0}, {0.3, 0.6}, 0.9, 2.5);
    VFunction v{{1.25, 7.5}};
    CHECK(rho_sa(m, 0, 0, v) == 7.5);
    CHECK(rho_sa(m, 1, 0, v) == 1.25);
    CHECK_THROWS_AS(rho_sa(m, 2, 0, v), IndexOutOfRange);
    CHECK_THROWS_AS(rho_sa(m, 0, 1, v), IndexOutOfRange);
}

TEST_CASE("rho_sa: tiny beta agrees with the expectation branch") {
    SeededRng rng(77, 0);
    for (int i = 0; i < 100; ++i) {
        TabularMdp m = testutil::random_mdp(rng, 10, 1, 0.9, 1e-10);
        VFunction v = testutil::random_v(rng, 10, 0.0, 1.0);
        const double risk = rho_sa(m, 0, 0, v);
        const double neutral = rho_sa(m.with_beta(0.0), 0, 0, v);
        double mean = 0.0;
        const auto row = m.transition_row(0, 0);
        for (int s2 = 0; s2 < 10; ++s2) mean += row[s2] * v.values[s2];
        CHECK(neutral == doctest::Approx(mean).epsilon(1e-13));
        CHECK(std::abs(risk - neutral) < 1e-8);
    }
}

TEST_CASE("rho_sa on the half-half row matches the frozen coin value") {
    TabularMdp m(2, 1, {0.5, 0.5, 0, 1}, {0, 0}, 0.9, 1.0);
    VFunction v{{0.0, 1.0}};
    CHECK(rho_sa(m, 0, 0, v) == doctest::Approx(0.37988549304172248).epsilon(1e-12));
}

TEST_CASE("apply_optimal_bellman: zero table maps to the rewards") {
    SeededRng rng(101, 0);
    TabularMdp m = testutil::random_mdp(rng, 4, 3, 0.8, 1.5);
    const QFunction out = apply_optimal_bellman(m, QFunction::zeros(4, 3));
    for (int s = 0; s < 4; ++s)
        for (int a = 0; a < 3; ++a) CHECK(out.at(s, a) == doctest::Approx(m.reward(s, a)));
    CHECK(sup_norm_distance(apply_optimal_bellman(m, out), apply_optimal_bellman(m, out)) == 0.0);
}

TEST_CASE("apply_optimal_bellman keeps iterates inside [0, 1/(1-gamma)]") {
    SeededRng rng(103, 0);
    for (int i = 0; i < 50; ++i) {
        TabularMdp m = testutil::random_mdp(rng, 5, 2, 0.9, rng.next_in(-2, 2));
        QFunction q = testutil::random_q(rng, 5, 2, 0.0, m.value_bound());
        const QFunction out = apply_optimal_bellman(m, q);
        for (double x : out.values) {
            CHECK(x >= 0.0);
            CHECK(x <= m.value_bound() + 1e-9);
        }
    }
}

TEST_CASE("repeated optimal backups reach the closed-form two-outcome fixed point") {
    // Choice pairs route to the absorbing pair with probability 1/2 each;
    // the fixed point at those pairs is 0.62379160349465562 for
    // gamma = 0.9, beta = 1 (high-precision evaluation of
    // -0.9 log(0.5 (1 + e^{-10}))).
    std::vector<double> q_row{0.5, 0.5};
    TabularMdp m(3, 1,
                 {0.0, 0.5, 0.5,
                  0.0, 1.0, 0.0,
                  0.0, 0.0, 1.0},
                 {0.0, 1.0, 0.0}, 0.9, 1.0);
    QFunction q = QFunction::zeros(3, 1);
    for (int i = 0; i < 400; ++i) q = apply_optimal_bellman(m, q);
    CHECK(q.at(0, 0) == doctest::Approx(0.62379160349465562).epsilon(1e-10));
    CHECK(q.at(1, 0) == doctest::Approx(10.0).epsilon(1e-10));
    CHECK(q.at(2, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("apply_policy_bellman coincides with the optimal backup on the greedy policy") {
    SeededRng rng(505, 0);
    for (int i = 0; i < 50; ++i) {
        TabularMdp m = testutil::random_mdp(rng, 4, 3, 0.85, rng.next_in(-2, 2));
        QFunction q = testutil::random_q(rng, 4, 3, 0.0, 3.0);
        const Policy pi = greedy_from_q(q);
        CHECK(sup_norm_distance(apply_policy_bellman(m, pi, q), apply_optimal_bellman(m, q)) ==
              0.0);
    }
}

TEST_CASE("apply_policy_bellman: single-state fixed point") {
    for (double beta : {-3.0, 0.0, 0.4, 2.0}) {
        TabularMdp m(1, 1, {1.0}, {0.5}, 0.5, beta);
        Policy pi{{0}};
        QFunction q = QFunction::zeros(1, 1);
        for (int i = 0; i < 200; ++i) q = apply_policy_bellman(m, pi, q);
        CHECK(q.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Lemma 1 contraction on randomized triples") {
    SeededRng rng(600, 0);
    for (int i = 0; i < 500; ++i) {
        const int S = 1 + rng.next_index(5), A = 1 + rng.next_index(3);
        const double gamma = 0.5 + 0.45 * rng.next_unit();
        TabularMdp m = testutil::random_mdp(rng, S, A, gamma, rng.next_in(-3, 3));
        QFunction f1 = testutil::random_q(rng, S, A, 0.0, m.value_bound());
        QFunction f2 = testutil::random_q(rng, S, A, 0.0, m.value_bound());
        const double lhs = sup_norm_distance(apply_optimal_bellman(m, f1),
                                             apply_optimal_bellman(m, f2));
        CHECK(lhs <= gamma * sup_norm_distance(f1, f2) + 1e-10);

        const Policy pi = testutil::random_policy(rng, S, A);
        const double lhs_pi = sup_norm_distance(apply_policy_bellman(m, pi, f1),
                                                apply_policy_bellman(m, pi, f2));
        CHECK(lhs_pi <= gamma * sup_norm_distance(f1, f2) + 1e-10);
    }
}

TEST_CASE("finite_horizon_utility: one step yields the policy rewards, N is monotone") {
    SeededRng rng(707, 0);
    TabularMdp m = testutil::random_mdp(rng, 5, 2, 0.9, -1.0);
    const Policy pi = testutil::random_policy(rng, 5, 2);
    const VFunction one = finite_horizon_utility(m, pi, 1);
    for (int s = 0; s < 5; ++s) CHECK(one.values[s] == doctest::Approx(m.reward(s, pi.actions[s])));

    const VFunction ten = finite_horizon_utility(m, pi, 10);
    const VFunction eleven = finite_horizon_utility(m, pi, 11);
    for (int s = 0; s < 5; ++s) {
        CHECK(ten.values[s] <= eleven.values[s] + 1e-12);
        CHECK(eleven.values[s] <= m.value_bound() + 1e-9);
    }
    CHECK_THROWS_AS(finite_horizon_utility(m, pi, 0), NonPositiveEps);
}
