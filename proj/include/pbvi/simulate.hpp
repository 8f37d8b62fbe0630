#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include "pbvi/belief.hpp"
#include "pbvi/model.hpp"
#include "pbvi/solver.hpp"

namespace pbvi {

struct SimulationResult {
    double mean = 0.0;
    double std_error = 0.0;
};

namespace detail {

inline std::size_t sample(std::span<const double> probs, std::mt19937_64& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last = i;
        if (u < acc) return i;
    }
    return last;
}

}  // namespace detail

/// Horizon after which discounted rewards contribute less than `truncation`.
inline std::size_t horizon_for(const PomdpModel& model, double truncation) {
    const double rmax = max_abs_reward(model);
    const double lambda = model.discount();
    if (rmax == 0.0 || lambda == 0.0) {
        return 1;
    }
    const double n = std::log(truncation * (1.0 - lambda) / rmax) / std::log(lambda);
    return static_cast<std::size_t>(std::max(1.0, std::ceil(n)));
}

/// Monte-Carlo estimate of the discounted return of the greedy policy from b0.
/// Seeded and reproducible.
inline SimulationResult simulate_policy(const PomdpModel& model, const Policy& policy, const Belief& b0,
                                        std::size_t horizon, std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t S = model.num_states();
    const std::size_t Z = model.num_observations();
    std::vector<double> row(S), obs(Z);
    double mean = 0.0, m2 = 0.0;  // Welford accumulators
    for (std::size_t t = 0; t < trials; ++t) {
        Belief b = b0;
        StateId s = detail::sample(b0.probs(), rng);
        double ret = 0.0, weight = 1.0;
        for (std::size_t step = 0; step < horizon; ++step) {
            const ActionId a = greedy_action(policy, model, b);
            ret += weight * model.reward(s, a);
            weight *= model.discount();
            for (StateId s2 = 0; s2 < S; ++s2) row[s2] = model.transition(a, s, s2);
            const StateId next = detail::sample(row, rng);
            for (ObsId z = 0; z < Z; ++z) obs[z] = model.observation(a, next, z);
            const ObsId z = detail::sample(obs, rng);
            // the sampled (s', z) pair has positive probability, so the update is defined
            b = belief_update(model, b, a, z).value_or(b);
            s = next;
        }
        const double d = ret - mean;
        mean += d / static_cast<double>(t + 1);
        m2 += d * (ret - mean);
    }
    SimulationResult out;
    out.mean = mean;
    if (trials > 1) {
        const double n = static_cast<double>(trials);
        out.std_error = std::sqrt(m2 / (n - 1.0) / n);
    }
    return out;
}

}  // namespace pbvi
