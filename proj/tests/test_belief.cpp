#include <gtest/gtest.h>

#include <random>

#include "pbvi/belief.hpp"
#include "test_support.hpp"

using namespace pbvi;

TEST(Belief, Constructors) {
    const auto u = Belief::uniform(4);
    for (std::size_t s = 0; s < 4; ++s) EXPECT_DOUBLE_EQ(u[s], 0.25);
    const auto v = Belief::vertex(3, 1);
    EXPECT_EQ(v.vector(), (std::vector<double>{0, 1, 0}));
}

TEST(BeliefUpdate, TigerListen) {
    const auto m = test::load("tiger.pomdp");
    const auto b = Belief::uniform(2);
    EXPECT_NEAR(obs_prob(m, b, 0, 0), 0.5, 1e-12);
    const auto next = belief_update(m, b, 0, 0);
    ASSERT_TRUE(next);
    EXPECT_NEAR((*next)[0], 0.85, 1e-12);
    EXPECT_NEAR((*next)[1], 0.15, 1e-12);
    // a second "left" growl: 0.85^2 / (0.85^2 + 0.15^2)
    const auto twice = belief_update(m, *next, 0, 0);
    EXPECT_NEAR((*twice)[0], 0.7225 / (0.7225 + 0.0225), 1e-12);
}

TEST(BeliefUpdate, OpeningResets) {
    const auto m = test::load("tiger.pomdp");
    const auto next = belief_update(m, Belief(std::vector<double>{0.9, 0.1}), 1, 1);
    ASSERT_TRUE(next);
    EXPECT_NEAR((*next)[0], 0.5, 1e-12);
}

TEST(BeliefUpdate, UnreachableObservation) {
    // observation 0 is impossible after "stay" in state 1 when O(1, 0) = 0
    ModelData d;
    d.states = {"a", "b"};
    d.actions = {"stay"};
    d.observations = {"x", "y"};
    d.transition = {1, 0, 0, 1};
    d.observation = {1, 0, 0, 1};
    d.reward = {0, 0};
    d.discount = 0.9;
    const PomdpModel m(std::move(d));
    EXPECT_FALSE(belief_update(m, Belief::vertex(2, 1), 0, 0).has_value());
    EXPECT_DOUBLE_EQ(obs_prob(m, Belief::vertex(2, 1), 0, 0), 0.0);
}

TEST(ExpectedReward, TigerListenAndOpen) {
    const auto m = test::load("tiger.pomdp");
    const Belief b(std::vector<double>{0.3, 0.7});
    EXPECT_NEAR(expected_reward(m, b, 0), -1.0, 1e-12);
    EXPECT_NEAR(expected_reward(m, b, 1), 0.3 * -100 + 0.7 * 10, 1e-12);
}

TEST(BeliefProperties, UpdatesStayOnTheSimplex) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = test::random_small_model(rng);
        const auto b = test::random_belief(m.num_states(), rng);
        double total_obs = 0.0;
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            double pz_sum = 0.0;
            for (ObsId z = 0; z < m.num_observations(); ++z) {
                pz_sum += obs_prob(m, b, a, z);
                const auto next = belief_update(m, b, a, z);
                ASSERT_TRUE(next);
                double sum = 0.0;
                for (double p : next->probs()) {
                    EXPECT_GE(p, 0.0);
                    sum += p;
                }
                EXPECT_NEAR(sum, 1.0, 1e-12);
            }
            EXPECT_NEAR(pz_sum, 1.0, 1e-12);
            total_obs += pz_sum;
        }
        EXPECT_NEAR(total_obs, static_cast<double>(m.num_actions()), 1e-9);
    }
}

TEST(BeliefProperties, UpdateMatchesBayesRuleOracle) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = test::random_small_model(rng);
        const auto S = m.num_states();
        const auto b = test::random_belief(S, rng);
        for (ActionId a = 0; a < m.num_actions(); ++a)
            for (ObsId z = 0; z < m.num_observations(); ++z) {
                std::vector<double> joint(S, 0.0);
                double pz = 0.0;
                for (StateId s = 0; s < S; ++s)
                    for (StateId s2 = 0; s2 < S; ++s2) {
                        const double p = b[s] * m.data().transition[(a * S + s) * S + s2] *
                                         m.data().observation[(a * S + s2) * m.num_observations() + z];
                        joint[s2] += p;
                        pz += p;
                    }
                const auto next = belief_update(m, b, a, z);
                for (StateId s2 = 0; s2 < S; ++s2) EXPECT_NEAR((*next)[s2], joint[s2] / pz, 1e-12);
                EXPECT_NEAR(obs_prob(m, b, a, z), pz, 1e-12);
            }
    }
}

TEST(BeliefProperties, ObservationProbabilityIsLinear) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = test::random_small_model(rng);
        const auto S = m.num_states();
        const auto b1 = test::random_belief(S, rng), b2 = test::random_belief(S, rng);
        const double w = u(rng);
        std::vector<double> mix(S);
        for (StateId s = 0; s < S; ++s) mix[s] = w * b1[s] + (1 - w) * b2[s];
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            EXPECT_NEAR(expected_reward(m, Belief(mix), a),
                        w * expected_reward(m, b1, a) + (1 - w) * expected_reward(m, b2, a), 1e-9);
            for (ObsId z = 0; z < m.num_observations(); ++z)
                EXPECT_NEAR(obs_prob(m, Belief(mix), a, z),
                            w * obs_prob(m, b1, a, z) + (1 - w) * obs_prob(m, b2, a, z), 1e-12);
        }
    }
}
