#pragma once

// Set-level DP updates: the exact update (incremental pruning), the
// enumeration oracle, and the point-based update with its LP-free variant.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbvi/backup.hpp"
#include "pbvi/belief.hpp"
#include "pbvi/errors.hpp"
#include "pbvi/geometry.hpp"
#include "pbvi/lp.hpp"
#include "pbvi/model.hpp"

namespace pbvi {

/// Reduces W to a parsimonious set: pointwise pruning, then a filter that
/// grows the kept set one LP-certified vector at a time. Kept vectors carry the
/// belief that certified them as witness.
inline VectorSet lp_prune(const VectorSet& W) {
    const double tol = W.tolerance();
    std::vector<AlphaVector> frontier = pointwise_prune(W).vectors();
    VectorSet kept(tol);
    while (!frontier.empty()) {
        auto b = dominance_check(frontier.front(), kept, true);
        if (!b) {
            frontier.erase(frontier.begin());
            continue;
        }
        const std::size_t best = lex_max_index(frontier, *b, tol);
        frontier[best].witness = std::move(*b);
        kept.push_back(std::move(frontier[best]));
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return kept;
}

/// Gives every member a witness from the LP against the rest of the set. A
/// singleton gets the uniform belief.
inline void assign_witnesses(VectorSet& set) {
    if (set.empty()) {
        return;
    }
    const std::size_t S = set[0].values.size();
    if (set.size() == 1) {
        set[0].witness = Belief::uniform(S);
        return;
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        VectorSet rest(set.tolerance());
        for (std::size_t j = 0; j < set.size(); ++j) {
            if (j != i) {
                rest.push_back(set[j]);
            }
        }
        set[i].witness = witness_lp(set[i], rest).point;
    }
}

namespace detail {

/// g(s) = r(s, a) / |Z| + discount * sum_{s'} P(s', z | s, a) alpha(s') for every alpha in V.
inline VectorSet projected_set(const PomdpModel& model, const VectorSet& V, ActionId a, ObsId z) {
    const std::size_t S = model.num_states();
    const double share = 1.0 / static_cast<double>(model.num_observations());
    VectorSet out(V.tolerance());
    for (const auto& alpha : V) {
        std::vector<double> g(S);
        for (StateId s = 0; s < S; ++s) {
            double sum = 0.0;
            for (StateId s2 = 0; s2 < S; ++s2) {
                sum += model.joint(a, s, z, s2) * alpha.values[s2];
            }
            g[s] = model.reward(s, a) * share + model.discount() * sum;
        }
        out.push_back({std::move(g), a, std::nullopt});
    }
    return out;
}

inline VectorSet cross_sum(const VectorSet& lhs, const VectorSet& rhs) {
    VectorSet out(lhs.tolerance());
    for (const auto& x : lhs) {
        for (const auto& y : rhs) {
            std::vector<double> v(x.values.size());
            for (std::size_t s = 0; s < v.size(); ++s) {
                v[s] = x.values[s] + y.values[s];
            }
            out.push_back({std::move(v), x.action, std::nullopt});
        }
    }
    return out;
}

}  // namespace detail

/// Exact DP update by incremental pruning. Returns the parsimonious set for
/// T V with actions and witness points.
inline VectorSet standard_dp_update(const PomdpModel& model, const VectorSet& V) {
    if (V.empty()) {
        throw std::invalid_argument("DP update of an empty vector set");
    }
    VectorSet all(V.tolerance());
    for (ActionId a = 0; a < model.num_actions(); ++a) {
        VectorSet acc = lp_prune(detail::projected_set(model, V, a, 0));
        for (ObsId z = 1; z < model.num_observations(); ++z) {
            acc = lp_prune(detail::cross_sum(acc, lp_prune(detail::projected_set(model, V, a, z))));
        }
        for (auto& v : acc) {
            all.push_back(std::move(v));
        }
    }
    VectorSet out = lp_prune(all);
    assign_witnesses(out);
    return out;
}

/// Every cross-sum combination for every action, unpruned:
/// beta(s) = r(s, a) + discount * sum_z sum_{s'} P(s', z | s, a) alpha_{i(z)}(s').
inline VectorSet monahan_candidates(const PomdpModel& model, const VectorSet& V,
                                    std::size_t explosion_bound = 1'000'000) {
    if (V.empty()) {
        throw std::invalid_argument("DP update of an empty vector set");
    }
    const std::size_t S = model.num_states(), Z = model.num_observations(), A = model.num_actions();
    const double combos = std::pow(static_cast<double>(V.size()), static_cast<double>(Z));
    if (combos * static_cast<double>(A) > static_cast<double>(explosion_bound)) {
        throw std::length_error("enumeration would generate " + std::to_string(combos * static_cast<double>(A)) +
                                " vectors");
    }
    VectorSet out(V.tolerance());
    std::vector<std::size_t> choice(Z, 0);
    for (ActionId a = 0; a < A; ++a) {
        std::fill(choice.begin(), choice.end(), 0);
        while (true) {
            std::vector<double> beta(S);
            for (StateId s = 0; s < S; ++s) {
                double future = 0.0;
                for (ObsId z = 0; z < Z; ++z) {
                    for (StateId s2 = 0; s2 < S; ++s2) {
                        future += model.observation(a, s2, z) * model.transition(a, s, s2) * V[choice[z]].values[s2];
                    }
                }
                beta[s] = model.reward(s, a) + model.discount() * future;
            }
            out.push_back({std::move(beta), a, std::nullopt});
            std::size_t z = 0;
            while (z < Z && ++choice[z] == V.size()) {
                choice[z++] = 0;
            }
            if (z == Z) {
                break;
            }
        }
    }
    return out;
}

/// Enumeration/reduction DP update: all candidates, then removal of each
/// vector that the remaining ones dominate.
inline VectorSet monahan_enumeration(const PomdpModel& model, const VectorSet& V,
                                     std::size_t explosion_bound = 1'000'000) {
    VectorSet candidates = monahan_candidates(model, V, explosion_bound);
    VectorSet unique(V.tolerance());
    for (auto& v : candidates) {
        unique.insert_unique(std::move(v));
    }
    std::size_t i = 0;
    while (i < unique.size()) {
        VectorSet others(unique.tolerance());
        for (std::size_t j = 0; j < unique.size(); ++j) {
            if (j != i) {
                others.push_back(unique[j]);
            }
        }
        if (!others.empty() && !dominance_check(unique[i], others, true)) {
            unique.erase(i);
        } else {
            ++i;
        }
    }
    assign_witnesses(unique);
    return unique;
}

/// Knobs shared by the point-based updates.
struct PointBasedOptions {
    /// Return the LP point only when its margin exceeds the tolerance.
    bool strict_positive = true;
    /// When set, witness backups reuse the action this set selects at the witness.
    const VectorSet* mpi_reference = nullptr;
};

/// Backs up V at the witness points of its members, skipping duplicates.
inline VectorSet back_up_witness_points(const PomdpModel& model, const VectorSet& V,
                                        const PointBasedOptions& options = {}) {
    VectorSet U(V.tolerance());
    for (const auto& beta : V) {
        if (!beta.witness) {
            throw std::invalid_argument("back_up_witness_points: vector without a witness");
        }
        AlphaVector alpha = options.mpi_reference
                                ? mpi_backup(model, *beta.witness, V,
                                             (*options.mpi_reference)[evaluate(*options.mpi_reference, *beta.witness).index].action)
                                : backup(model, *beta.witness, V);
        U.insert_unique(std::move(alpha));
    }
    return U;
}

/// Adds backups at LP-found beliefs until U dominates every member of V.
inline VectorSet back_up_lp_points(const PomdpModel& model, VectorSet U, const VectorSet& V,
                                   const PointBasedOptions& options = {}) {
    for (const auto& beta : V) {
        const std::size_t cap = 10 * (V.size() + U.size());
        std::size_t rounds = 0;
        while (auto b = dominance_check(beta, U, options.strict_positive)) {
            if (++rounds > cap) {
                throw IterationLimitError("back_up_lp_points: no progress after " + std::to_string(cap) +
                                          " LP rounds for one vector");
            }
            AlphaVector alpha = backup(model, *b, V);
            if (options.strict_positive) {
                U.push_back(std::move(alpha));
            } else if (!U.insert_unique(std::move(alpha))) {
                break;
            }
        }
    }
    return U;
}

/// Point-based DP update: witness backups, then LP backups until the result
/// dominates V. Sandwiched between V and T V when V is uniformly improvable.
inline VectorSet point_based_dpu(const PomdpModel& model, const VectorSet& V, const PointBasedOptions& options = {}) {
    return back_up_lp_points(model, back_up_witness_points(model, V, options), V, options);
}

/// LP-free variant: V united with its witness backups, pointwise pruned.
inline VectorSet nolp_point_based_dpu(const PomdpModel& model, const VectorSet& V,
                                      const PointBasedOptions& options = {}) {
    VectorSet both = V;
    for (auto& v : back_up_witness_points(model, V, options)) {
        both.push_back(std::move(v));
    }
    return pointwise_prune(both);
}

}  // namespace pbvi
