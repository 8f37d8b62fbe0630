#include <gtest/gtest.h>

#include <random>

#include "pbvi/dp_update.hpp"
#include "pbvi/solver.hpp"
#include "test_support.hpp"

using namespace pbvi;

namespace {

bool has_vector(const VectorSet& set, std::vector<double> v, double tol) {
    for (const auto& x : set)
        if (approx_equal(x.values, v, tol)) return true;
    return false;
}

// max over probes of (lhs(b) - rhs(b)): non-positive means lhs <= rhs on the probes
double worst_excess(const std::function<double(const Belief&)>& lhs, const std::function<double(const Belief&)>& rhs,
                    const std::vector<Belief>& probes) {
    double worst = -INFINITY;
    for (const auto& b : probes) worst = std::max(worst, lhs(b) - rhs(b));
    return worst;
}

}  // namespace

TEST(StandardDpUpdate, TigerFirstStep) {
    const auto m = test::load("tiger.pomdp");
    const auto U = standard_dp_update(m, initial_set(m));
    ASSERT_EQ(U.size(), 3u);
    EXPECT_TRUE(has_vector(U, {-1901, -1901}, 1e-9));
    EXPECT_TRUE(has_vector(U, {-2000, -1890}, 1e-9));
    EXPECT_TRUE(has_vector(U, {-1890, -2000}, 1e-9));
    for (const auto& v : U) EXPECT_TRUE(v.witness.has_value());
}

TEST(StandardDpUpdate, ZeroRewardIsAFixedPoint) {
    const auto m = test::load("zero_reward.pomdp");
    const auto U = standard_dp_update(m, initial_set(m));
    ASSERT_EQ(U.size(), 1u);
    EXPECT_TRUE(approx_equal(U[0].values, std::vector<double>{0, 0}, 1e-12));
}

TEST(MonahanCandidates, Counts) {
    const auto tiger = test::load("tiger.pomdp");
    EXPECT_EQ(monahan_candidates(tiger, initial_set(tiger)).size(), tiger.num_actions());

    std::mt19937_64 rng(51);
    const auto m = test::random_model(2, 1, 2, 0.9, rng);
    EXPECT_EQ(monahan_candidates(m, test::random_set(2, 2, rng)).size(), 4u);
    EXPECT_THROW(monahan_candidates(m, test::random_set(2, 2, rng), 3), std::length_error);
}

TEST(PointBased, WitnessAndLpBackupsOnTiger) {
    const auto m = test::load("tiger.pomdp");
    const auto V = initial_set(m);
    const auto W = back_up_witness_points(m, V);
    ASSERT_EQ(W.size(), 1u);
    EXPECT_TRUE(approx_equal(W[0].values, std::vector<double>{-1901, -1901}, 1e-9));
    // the single vector already dominates alpha_c pointwise, so no LP backups are added
    EXPECT_EQ(back_up_lp_points(m, W, V).size(), 1u);

    const auto U = standard_dp_update(m, V);
    const auto P = point_based_dpu(m, U);
    for (const auto& v : U) EXPECT_TRUE(has_vector(P, v.values, 1e-9) || value_at(P, *v.witness) >= v.dot(*v.witness));
    EXPECT_THROW(back_up_witness_points(m, VectorSet(std::vector<AlphaVector>{{{0, 0}, 0, std::nullopt}}, 1e-6)),
                 std::invalid_argument);
}

TEST(DpUpdateProperties, MatchesEnumerationOracle) {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = test::random_small_model(rng, 0.85);
        const auto V = test::improvable_set(m, trial % 3);
        const auto fast = standard_dp_update(m, V);
        const auto slow = monahan_enumeration(m, V);
        EXPECT_TRUE(test::same_sets(fast, slow, 1e-6)) << "trial " << trial << ": " << fast.size() << " vs "
                                                       << slow.size();
        for (const auto& b : test::probe_beliefs(m.num_states(), 30, trial))
            EXPECT_NEAR(value_at(fast, b), test::brute_tv(m, V, b.vector()), 1e-8);
    }
}

TEST(DpUpdateProperties, ResultIsParsimonious) {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = test::random_small_model(rng);
        const auto U = test::improvable_set(m, 1 + trial % 3);
        for (std::size_t i = 0; i < U.size(); ++i) {
            VectorSet rest(U.tolerance());
            for (std::size_t j = 0; j < U.size(); ++j)
                if (j != i) rest.push_back(U[j]);
            if (rest.empty()) continue;
            // every member is strictly best somewhere, and its witness shows it
            EXPECT_GT(witness_lp(U[i], rest).objective, 0.0);
            ASSERT_TRUE(U[i].witness);
            EXPECT_GE(U[i].dot(*U[i].witness), value_at(rest, *U[i].witness) - 1e-9);
        }
    }
}

TEST(DpUpdateProperties, PointBasedUpdateIsSandwiched) {
    std::mt19937_64 rng(54);
    for (bool strict : {true, false}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto m = test::random_small_model(rng);
            const auto V = test::improvable_set(m, 1 + trial % 3);
            PointBasedOptions opts;
            opts.strict_positive = strict;
            const auto U = point_based_dpu(m, V, opts);
            const auto probes = test::probe_beliefs(m.num_states(), 100, trial);
            auto v = [&](const Belief& b) { return value_at(V, b); };
            auto u = [&](const Belief& b) { return value_at(U, b); };
            auto tv = [&](const Belief& b) { return test::brute_tv(m, V, b.vector()); };
            EXPECT_LE(worst_excess(v, u, probes), 1e-6) << "strict=" << strict;
            EXPECT_LE(worst_excess(u, tv, probes), 1e-9);
            // at each witness of V the update is exact
            for (const auto& beta : V) EXPECT_NEAR(u(*beta.witness), tv(*beta.witness), 1e-9);
        }
    }
}

TEST(DpUpdateProperties, NolpVariantIsSandwiched) {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = test::random_small_model(rng);
        const auto V = test::improvable_set(m, 1 + trial % 3);
        const auto U = nolp_point_based_dpu(m, V);
        const auto probes = test::probe_beliefs(m.num_states(), 100, trial);
        for (const auto& b : probes) {
            EXPECT_GE(value_at(U, b), value_at(V, b) - 1e-12);
            EXPECT_LE(value_at(U, b), test::brute_tv(m, V, b.vector()) + 1e-9);
        }
    }
}

TEST(DpUpdateProperties, OperatorIsIsotone) {
    std::mt19937_64 rng(56);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = test::random_small_model(rng);
        const auto S = m.num_states();
        const auto V = test::random_set(3, S, rng);
        auto bigger = V;
        for (const auto& x : test::random_set(2, S, rng)) bigger.push_back(x);
        const auto TV = standard_dp_update(m, V), TW = standard_dp_update(m, bigger);
        for (const auto& b : test::probe_beliefs(S, 50, trial)) EXPECT_LE(value_at(TV, b), value_at(TW, b) + 1e-9);
    }
}

TEST(DpUpdateProperties, OperatorIsAContraction) {
    std::mt19937_64 rng(57);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = test::random_small_model(rng, 0.8);
        const auto S = m.num_states();
        const auto V = test::random_set(3, S, rng), W = test::random_set(4, S, rng);
        const double before = bellman_residual(V, W);
        const double after = bellman_residual(standard_dp_update(m, V), standard_dp_update(m, W));
        EXPECT_LE(after, m.discount() * before + 1e-9);
    }
}
