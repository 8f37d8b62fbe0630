#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "pbvi/geometry.hpp"
#include "test_support.hpp"

using namespace pbvi;

namespace {

VectorSet make_set(std::initializer_list<std::vector<double>> rows) {
    VectorSet out;
    ActionId a = 0;
    for (const auto& r : rows) out.push_back({r, a++, std::nullopt});
    return out;
}

}  // namespace

TEST(Evaluate, PicksMaximizer) {
    const auto V = make_set({{1, 0}, {0, 1}, {0.4, 0.4}});
    auto e = evaluate(V, Belief(std::vector<double>{0.8, 0.2}));
    EXPECT_DOUBLE_EQ(e.value, 0.8);
    EXPECT_EQ(e.index, 0u);
    e = evaluate(V, Belief::uniform(2));
    EXPECT_DOUBLE_EQ(e.value, 0.5);
    EXPECT_DOUBLE_EQ(value_at(V, Belief::vertex(2, 1)), 1.0);
}

TEST(LexMax, BreaksTiesLexicographically) {
    const auto V = make_set({{0, 2}, {2, 0}, {1, 1}});
    // all three give 1 at the uniform belief; (2, 0) is lexicographically greatest
    EXPECT_EQ(lex_max_index(V.vectors(), Belief::uniform(2), 1e-6), 1u);
    // away from the tie, the value decides
    EXPECT_EQ(lex_max_index(V.vectors(), Belief(std::vector<double>{0.2, 0.8}), 1e-6), 0u);
}

TEST(LexMax, TiesWithinTolerance) {
    const auto V = make_set({{1, 1}, {1 + 1e-8, 1 - 2e-8}});
    EXPECT_EQ(lex_max_index(V.vectors(), Belief::uniform(2), 1e-6), 1u);
}

TEST(VectorSet, InsertUnique) {
    VectorSet V;
    EXPECT_TRUE(V.insert_unique({{1, 2}, 0, std::nullopt}));
    EXPECT_FALSE(V.insert_unique({{1 + 1e-8, 2}, 1, std::nullopt}));
    EXPECT_TRUE(V.insert_unique({{1 + 1e-3, 2}, 1, std::nullopt}));
    EXPECT_EQ(V.size(), 2u);
    EXPECT_EQ(V.find(std::vector<double>{1, 2}), 0u);
    EXPECT_FALSE(V.find(std::vector<double>{5, 5}).has_value());
}

TEST(PointwisePrune, Examples) {
    const auto V = make_set({{1, 1}, {2, 2}, {0, 3}, {2, 2}, {-1, 3}});
    const auto P = pointwise_prune(V);
    ASSERT_EQ(P.size(), 2u);
    EXPECT_EQ(P[0].values, (std::vector<double>{2, 2}));
    EXPECT_EQ(P[0].action, 1u);  // earliest of the duplicates survives
    EXPECT_EQ(P[1].values, (std::vector<double>{0, 3}));
}

TEST(GeometryProperties, PrunePreservesValue) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t S = 2 + trial % 3;
        const auto V = test::random_set(15, S, rng);
        const auto P = pointwise_prune(V);
        EXPECT_LE(P.size(), V.size());
        for (int i = 0; i < 50; ++i) {
            const auto b = test::random_belief(S, rng);
            EXPECT_NEAR(value_at(P, b), test::brute_value(V, b.vector()), 1e-12);
        }
        // no survivor is dominated by another
        for (std::size_t i = 0; i < P.size(); ++i)
            for (std::size_t j = 0; j < P.size(); ++j)
                if (i != j) EXPECT_FALSE(pointwise_dominates(P[j].values, P[i].values, P.tolerance()));
    }
}

TEST(GeometryProperties, EvaluateIsPermutationInvariant) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t S = 2 + trial % 4;
        auto vectors = test::random_set(12, S, rng).vectors();
        const VectorSet V(vectors, kDefaultTolerance);
        std::shuffle(vectors.begin(), vectors.end(), rng);
        const VectorSet W(vectors, kDefaultTolerance);
        for (int i = 0; i < 50; ++i) {
            const auto b = test::random_belief(S, rng);
            EXPECT_DOUBLE_EQ(evaluate(V, b).value, evaluate(W, b).value);
            EXPECT_EQ(V[lex_max_index(V.vectors(), b, 1e-6)].values, W[lex_max_index(W.vectors(), b, 1e-6)].values);
        }
    }
}

TEST(GeometryProperties, LexMaxAttainsTheMaximum) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t S = 2 + trial % 3;
        const auto V = test::random_set(8, S, rng);
        const auto b = test::random_belief(S, rng);
        EXPECT_NEAR(lex_max(V.vectors(), b, 1e-6).dot(b), test::brute_value(V, b.vector()), 1e-6);
    }
}
