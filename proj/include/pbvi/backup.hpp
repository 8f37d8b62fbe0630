#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pbvi/belief.hpp"
#include "pbvi/geometry.hpp"
#include "pbvi/model.hpp"

namespace pbvi {

namespace detail {

/// beta_a(s) = r(s, a) + discount * sum_{z, s'} P(s', z | s, a) beta_{a,z}(s'),
/// where beta_{a,z} is the lexicographic maximizer of V at b^a_z. Observations
/// that are unreachable from b use the maximizer at the uniform belief.
inline std::vector<double> action_vector(const PomdpModel& model, const Belief& b, const VectorSet& V, ActionId a,
                                         std::optional<std::size_t>& uniform_pick) {
    const std::size_t S = model.num_states();
    const double tol = V.tolerance();
    std::vector<double> beta(S);
    for (StateId s = 0; s < S; ++s) {
        beta[s] = model.reward(s, a);
    }
    for (ObsId z = 0; z < model.num_observations(); ++z) {
        std::size_t pick;
        if (auto next = belief_update(model, b, a, z)) {
            pick = lex_max_index(V.vectors(), *next, tol);
        } else {
            if (!uniform_pick) {
                uniform_pick = lex_max_index(V.vectors(), Belief::uniform(S), tol);
            }
            pick = *uniform_pick;
        }
        const auto& alpha = V[pick].values;
        for (StateId s = 0; s < S; ++s) {
            double sum = 0.0;
            if (const double* row = model.joint_row(a, s, z)) {
                for (StateId s2 = 0; s2 < S; ++s2) sum += row[s2] * alpha[s2];
            } else {
                for (StateId s2 = 0; s2 < S; ++s2) sum += model.joint(a, s, z, s2) * alpha[s2];
            }
            beta[s] += model.discount() * sum;
        }
    }
    return beta;
}

}  // namespace detail

/// The member of T V that is maximal at b, built in three steps: best
/// continuation vector per (a, z), one candidate per action, then the
/// lexicographic maximizer at b. b is recorded as the witness.
inline AlphaVector backup(const PomdpModel& model, const Belief& b, const VectorSet& V) {
    if (V.empty()) {
        throw std::invalid_argument("backup from an empty vector set");
    }
    std::optional<std::size_t> uniform_pick;
    std::vector<AlphaVector> candidates;
    candidates.reserve(model.num_actions());
    for (ActionId a = 0; a < model.num_actions(); ++a) {
        candidates.push_back({detail::action_vector(model, b, V, a, uniform_pick), a, std::nullopt});
    }
    const std::size_t best = lex_max_index(candidates, b, V.tolerance());
    AlphaVector out = std::move(candidates[best]);
    out.witness = b;
    return out;
}

/// Backup with the action fixed instead of maximized.
inline AlphaVector mpi_backup(const PomdpModel& model, const Belief& b, const VectorSet& V, ActionId fixed_action) {
    if (V.empty()) {
        throw std::invalid_argument("backup from an empty vector set");
    }
    std::optional<std::size_t> uniform_pick;
    return {detail::action_vector(model, b, V, fixed_action, uniform_pick), fixed_action, b};
}

}  // namespace pbvi
