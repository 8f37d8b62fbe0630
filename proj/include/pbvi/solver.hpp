#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pbvi/backup.hpp"
#include "pbvi/belief.hpp"
#include "pbvi/dp_update.hpp"
#include "pbvi/errors.hpp"
#include "pbvi/geometry.hpp"
#include "pbvi/lp.hpp"
#include "pbvi/model.hpp"

namespace pbvi {

enum class PointBasedVariant { lp, nolp };
enum class BackupMode { standard, mpi };
enum class UpdateKind { standard, point_based };

struct SolverConfig {
    double epsilon = 0.01;
    double delta1 = 0.1;
    std::optional<double> discount_override;
    double tolerance = kDefaultTolerance;
    PointBasedVariant variant = PointBasedVariant::lp;
    BackupMode backup_mode = BackupMode::standard;
    bool lp_backup_nonpositive = true;
    std::size_t max_standard_updates = 10'000;
    std::size_t max_point_based_updates = 100'000;
    std::uint64_t seed = 0;
    /// Called with every set produced by a standard or point-based update.
    std::function<void(UpdateKind, const VectorSet&)> on_update;

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
        if (!(delta1 > 0.0 && delta1 < 1.0)) throw std::invalid_argument("delta1 must lie in (0, 1)");
        if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    }
};

struct SolverStats {
    std::size_t standard_update_count = 0;
    std::size_t point_based_update_count = 0;
    double standard_update_time = 0.0;     // seconds
    double point_based_update_time = 0.0;  // seconds
    double residual_time = 0.0;            // residual LPs and stop tests, excluded from update times
    std::vector<double> residual_history;  // one per standard update
    std::vector<std::size_t> vector_count_history;
    std::optional<double> quality_ratio;
    std::optional<double> complexity_ratio;
    double final_residual = 0.0;
    double final_residual_bound = 0.0;  // 2 * discount * residual / (1 - discount)
};

/// Thrown when a solver loop exceeds its guard; carries the stats so far.
class SolverLimitError : public IterationLimitError {
public:
    SolverLimitError(const std::string& msg, SolverStats stats) : IterationLimitError(msg), stats_(std::move(stats)) {}
    const SolverStats& stats() const noexcept { return stats_; }

private:
    SolverStats stats_;
};

/// Action-tagged vector set plus the certificate that came with it.
struct Policy {
    VectorSet vectors;
    double discount = 0.0;
    double epsilon_bound = 0.0;
};

/// Residual threshold under which the greedy policy is epsilon-optimal.
inline double delta_threshold(double epsilon, double discount) {
    if (discount == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return epsilon * (1.0 - discount) / (2.0 * discount);
}

/// Optimality gap certified by a Bellman residual.
inline double epsilon_bound(double residual, double discount) {
    return 2.0 * discount * std::max(residual, 0.0) / (1.0 - discount);
}

/// Singleton {alpha_c} with c = min r / (1 - discount); uniformly improvable.
inline VectorSet initial_set(const PomdpModel& model, double tolerance = kDefaultTolerance) {
    const double c = min_reward(model) / (1.0 - model.discount());
    VectorSet out(tolerance);
    out.push_back({std::vector<double>(model.num_states(), c), 0, Belief::uniform(model.num_states())});
    return out;
}

/// True iff max over witnesses w of members of U of |U(w) - V(w)| <= delta1 * delta.
inline bool stop_condition(const VectorSet& U, const VectorSet& V, double delta, double delta1) {
    double worst = 0.0;
    for (const auto& alpha : U) {
        if (!alpha.witness) {
            throw std::invalid_argument("stop_condition: vector without a witness");
        }
        worst = std::max(worst, std::abs(value_at(U, *alpha.witness) - value_at(V, *alpha.witness)));
    }
    return worst <= delta1 * delta;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

inline PomdpModel effective_model(const PomdpModel& model, const SolverConfig& config) {
    return config.discount_override ? model.with_discount(*config.discount_override) : model;
}

inline VectorSet retolerance(const VectorSet& set, double tolerance) {
    return VectorSet(set.vectors(), tolerance);
}

}  // namespace detail

/// Point-based value iteration from U: repeated point-based updates until the
/// witness-point stop test passes. Returns the last input to the update.
/// `standard_output` is the set of the preceding standard update (for MPI backups).
inline VectorSet point_based_vi(const PomdpModel& model, VectorSet U, double delta, const SolverConfig& config,
                                SolverStats& stats, const VectorSet* standard_output = nullptr) {
    PointBasedOptions options;
    options.strict_positive = !config.lp_backup_nonpositive;
    const VectorSet reference = standard_output ? *standard_output : U;
    if (config.backup_mode == BackupMode::mpi) {
        options.mpi_reference = &reference;
    }
    VectorSet V(U.tolerance());
    do {
        if (stats.point_based_update_count >= config.max_point_based_updates) {
            throw SolverLimitError("point-based update limit reached", stats);
        }
        V = std::move(U);
        const auto start = detail::Clock::now();
        U = config.variant == PointBasedVariant::lp ? point_based_dpu(model, V, options)
                                                    : nolp_point_based_dpu(model, V, options);
        stats.point_based_update_time += detail::seconds_since(start);
        ++stats.point_based_update_count;
        stats.vector_count_history.push_back(U.size());
        if (config.on_update) {
            config.on_update(UpdateKind::point_based, U);
        }
    } while ([&] {
        const auto start = detail::Clock::now();
        const bool stop = stop_condition(U, V, delta, config.delta1);
        stats.residual_time += detail::seconds_since(start);
        return !stop;
    }());
    return V;
}

namespace detail {

// Shared loop of value iteration (accelerate = false) and its point-based
// accelerated form (accelerate = true).
inline std::pair<Policy, SolverStats> run_value_iteration(const PomdpModel& input, const SolverConfig& config,
                                                          std::optional<VectorSet> initial, bool accelerate) {
    config.validate();
    const PomdpModel model = effective_model(input, config);
    const double lambda = model.discount();
    const double delta = delta_threshold(config.epsilon, lambda);
    // Starting from alpha_c every iterate dominates its predecessor, so the
    // one-sided residual equals the two-sided one.
    const bool one_sided = !initial.has_value();
    VectorSet V = initial ? retolerance(*initial, config.tolerance) : initial_set(model, config.tolerance);
    if (!one_sided) {
        assign_witnesses(V);
    }

    SolverStats stats;
    VectorSet U(config.tolerance);
    double r = 0.0;
    do {
        if (stats.standard_update_count >= config.max_standard_updates) {
            throw SolverLimitError("standard update limit reached", stats);
        }
        auto start = Clock::now();
        U = standard_dp_update(model, V);
        stats.standard_update_time += seconds_since(start);
        ++stats.standard_update_count;
        stats.vector_count_history.push_back(U.size());
        if (config.on_update) {
            config.on_update(UpdateKind::standard, U);
        }

        start = Clock::now();
        r = one_sided ? residual_one_sided(U, V) : bellman_residual(U, V);
        stats.residual_time += seconds_since(start);
        stats.residual_history.push_back(r);

        if (r > delta) {
            V = accelerate ? point_based_vi(model, U, delta, config, stats, &U) : U;
        }
    } while (r > delta);

    stats.final_residual = r;
    stats.final_residual_bound = epsilon_bound(r, lambda);
    return {Policy{std::move(U), lambda, stats.final_residual_bound}, std::move(stats)};
}

}  // namespace detail

/// Value iteration with exact DP updates until the residual certifies epsilon-optimality.
inline std::pair<Policy, SolverStats> vi(const PomdpModel& model, const SolverConfig& config = {},
                                         std::optional<VectorSet> initial = std::nullopt) {
    return detail::run_value_iteration(model, config, std::move(initial), false);
}

/// Value iteration with point-based value iteration between exact updates.
inline std::pair<Policy, SolverStats> vi1(const PomdpModel& model, const SolverConfig& config = {},
                                          std::optional<VectorSet> initial = std::nullopt) {
    return detail::run_value_iteration(model, config, std::move(initial), true);
}

/// One-step lookahead against the policy's value function; lowest index wins ties.
inline ActionId greedy_action(const Policy& policy, const PomdpModel& model, const Belief& b) {
    ActionId best_action = 0;
    double best = -INFINITY;
    for (ActionId a = 0; a < model.num_actions(); ++a) {
        double q = expected_reward(model, b, a);
        for (ObsId z = 0; z < model.num_observations(); ++z) {
            const double p = obs_prob(model, b, a, z);
            if (auto next = belief_update(model, b, a, z)) {
                q += policy.discount * p * value_at(policy.vectors, *next);
            }
        }
        if (q > best + 1e-12) {
            best = q;
            best_action = a;
        }
    }
    return best_action;
}

/// quality = VI updates / (VI1 standard + point-based updates);
/// complexity = mean point-based update time / mean standard update time.
inline std::pair<double, double> compute_ratios(const SolverStats& vi_stats, const SolverStats& vi1_stats) {
    const double total = static_cast<double>(vi1_stats.standard_update_count + vi1_stats.point_based_update_count);
    if (total == 0.0 || vi_stats.standard_update_count == 0 || vi1_stats.point_based_update_count == 0 ||
        vi_stats.standard_update_time == 0.0) {
        throw std::domain_error("compute_ratios: zero denominator");
    }
    const double quality = static_cast<double>(vi_stats.standard_update_count) / total;
    const double pb_avg = vi1_stats.point_based_update_time / static_cast<double>(vi1_stats.point_based_update_count);
    const double std_avg = vi_stats.standard_update_time / static_cast<double>(vi_stats.standard_update_count);
    return {quality, pb_avg / std_avg};
}

}  // namespace pbvi
