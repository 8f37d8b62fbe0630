#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "pbvi/model.hpp"

namespace pbvi {

/// Probability distribution over states.
class Belief {
public:
    Belief() = default;
    explicit Belief(std::vector<double> probs) : probs_(std::move(probs)) {}

    static Belief uniform(std::size_t n) { return Belief(std::vector<double>(n, 1.0 / static_cast<double>(n))); }

    static Belief vertex(std::size_t n, std::size_t s) {
        std::vector<double> p(n, 0.0);
        p[s] = 1.0;
        return Belief(std::move(p));
    }

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t s) const { return probs_[s]; }
    std::span<const double> probs() const noexcept { return probs_; }
    const std::vector<double>& vector() const noexcept { return probs_; }

    bool operator==(const Belief&) const = default;

private:
    std::vector<double> probs_;
};

/// Observation probabilities below this are treated as zero.
inline constexpr double kUnreachableThreshold = 1e-12;

inline double dot(std::span<const double> x, std::span<const double> y) {
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

/// P(z | b, a) = sum_{s, s'} P(z | s', a) P(s' | s, a) b(s).
inline double obs_prob(const PomdpModel& model, const Belief& b, ActionId a, ObsId z) {
    const std::size_t S = model.num_states();
    double total = 0.0;
    for (StateId s = 0; s < S; ++s) {
        if (b[s] == 0.0) {
            continue;
        }
        double row = 0.0;
        for (StateId s2 = 0; s2 < S; ++s2) {
            row += model.joint(a, s, z, s2);
        }
        total += b[s] * row;
    }
    return total;
}

/// Bayes update b^a_z. Returns nullopt when z cannot be observed after doing a in b.
inline std::optional<Belief> belief_update(const PomdpModel& model, const Belief& b, ActionId a, ObsId z) {
    const std::size_t S = model.num_states();
    std::vector<double> next(S, 0.0);
    for (StateId s = 0; s < S; ++s) {
        if (b[s] == 0.0) {
            continue;
        }
        for (StateId s2 = 0; s2 < S; ++s2) {
            next[s2] += model.joint(a, s, z, s2) * b[s];
        }
    }
    const double norm = std::accumulate(next.begin(), next.end(), 0.0);
    if (norm < kUnreachableThreshold) {
        return std::nullopt;
    }
    for (auto& p : next) {
        p /= norm;
    }
    // second pass washes out drift from the division
    const double again = std::accumulate(next.begin(), next.end(), 0.0);
    for (auto& p : next) {
        p /= again;
    }
    return Belief(std::move(next));
}

/// r(b, a) = sum_s r(s, a) b(s).
inline double expected_reward(const PomdpModel& model, const Belief& b, ActionId a) {
    double total = 0.0;
    for (StateId s = 0; s < model.num_states(); ++s) {
        total += model.reward(s, a) * b[s];
    }
    return total;
}

}  // namespace pbvi
