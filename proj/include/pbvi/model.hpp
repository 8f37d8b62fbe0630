#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pbvi/errors.hpp"

namespace pbvi {

using StateId = std::size_t;
using ActionId = std::size_t;
using ObsId = std::size_t;

/// Default numerical round-off tolerance used across the library.
inline constexpr double kDefaultTolerance = 1e-6;

/// Raw model tables before validation. Dense, row-major:
///   transition[(a * S + s) * S + s2]   = P(s2 | s, a)
///   observation[(a * S + s2) * Z + z]  = P(z | s2, a)
///   reward[s * A + a]                  = r(s, a)
struct ModelData {
    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<std::string> observations;
    std::vector<double> transition;
    std::vector<double> observation;
    std::vector<double> reward;
    double discount = 0.95;
    std::optional<std::vector<double>> start;
};

/// Immutable POMDP (S, Z, A, r, P, O, discount). All indices refer to the
/// ordered name lists fixed at construction.
class PomdpModel {
public:
    /// Products P(s', z | s, a) are cached when the table has at most this many entries.
    static constexpr std::size_t kJointTableBudget = 10'000'000;

    explicit PomdpModel(ModelData data, double tolerance = kDefaultTolerance) : data_(std::move(data)) {
        validate(tolerance);
        build_joint();
    }

    std::size_t num_states() const noexcept { return data_.states.size(); }
    std::size_t num_actions() const noexcept { return data_.actions.size(); }
    std::size_t num_observations() const noexcept { return data_.observations.size(); }

    const std::vector<std::string>& state_names() const noexcept { return data_.states; }
    const std::vector<std::string>& action_names() const noexcept { return data_.actions; }
    const std::vector<std::string>& observation_names() const noexcept { return data_.observations; }

    double discount() const noexcept { return data_.discount; }
    const std::optional<std::vector<double>>& start() const noexcept { return data_.start; }

    double transition(ActionId a, StateId s, StateId s2) const {
        return data_.transition[(a * num_states() + s) * num_states() + s2];
    }
    double observation(ActionId a, StateId s2, ObsId z) const {
        return data_.observation[(a * num_states() + s2) * num_observations() + z];
    }
    double reward(StateId s, ActionId a) const { return data_.reward[s * num_actions() + a]; }

    /// P(s2, z | s, a) = P(z | s2, a) * P(s2 | s, a).
    double joint(ActionId a, StateId s, ObsId z, StateId s2) const {
        if (!joint_.empty()) {
            return joint_[joint_index(a, s, z, 0) + s2];
        }
        return observation(a, s2, z) * transition(a, s, s2);
    }

    /// Contiguous row P(., z | s, a) over next states, or nullptr when the table is not cached.
    const double* joint_row(ActionId a, StateId s, ObsId z) const {
        return joint_.empty() ? nullptr : joint_.data() + joint_index(a, s, z, 0);
    }

    const ModelData& data() const noexcept { return data_; }

    /// Same model with a different discount factor.
    PomdpModel with_discount(double discount) const {
        ModelData copy = data_;
        copy.discount = discount;
        return PomdpModel(std::move(copy));
    }

private:
    std::size_t joint_index(ActionId a, StateId s, ObsId z, StateId s2) const {
        const std::size_t S = num_states();
        return ((a * S + s) * num_observations() + z) * S + s2;
    }

    static void check_row(double* row, std::size_t n, double tolerance, const std::string& what) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(row[i]) || row[i] < 0.0) {
                throw ModelError(what + " has a negative or non-finite entry");
            }
            sum += row[i];
        }
        if (std::abs(sum - 1.0) > tolerance) {
            throw ModelError(what + " sums to " + std::to_string(sum) + ", not 1");
        }
        for (std::size_t i = 0; i < n; ++i) {
            row[i] /= sum;
        }
    }

    void validate(double tolerance) {
        const std::size_t S = num_states();
        const std::size_t A = num_actions();
        const std::size_t Z = num_observations();
        if (S == 0 || A == 0 || Z == 0) {
            throw ModelError("model needs at least one state, action and observation");
        }
        if (!(data_.discount >= 0.0 && data_.discount < 1.0)) {
            throw ModelError("discount " + std::to_string(data_.discount) + " is outside [0, 1)");
        }
        if (data_.transition.size() != A * S * S || data_.observation.size() != A * S * Z ||
            data_.reward.size() != S * A) {
            throw ModelError("model table dimensions do not match |S|, |A|, |Z|");
        }
        for (ActionId a = 0; a < A; ++a) {
            for (StateId s = 0; s < S; ++s) {
                check_row(&data_.transition[(a * S + s) * S], S, tolerance,
                          "transition row (action " + data_.actions[a] + ", state " + data_.states[s] + ")");
                check_row(&data_.observation[(a * S + s) * Z], Z, tolerance,
                          "observation row (action " + data_.actions[a] + ", state " + data_.states[s] + ")");
            }
        }
        for (double r : data_.reward) {
            if (!std::isfinite(r)) {
                throw ModelError("reward table has a non-finite entry");
            }
        }
        if (data_.start) {
            if (data_.start->size() != S) {
                throw ModelError("start distribution has the wrong length");
            }
            check_row(data_.start->data(), S, tolerance, "start distribution");
        }
    }

    void build_joint() {
        const std::size_t S = num_states();
        const std::size_t total = num_actions() * S * num_observations() * S;
        if (total > kJointTableBudget) {
            return;
        }
        joint_.assign(total, 0.0);
        for (ActionId a = 0; a < num_actions(); ++a) {
            for (StateId s = 0; s < S; ++s) {
                for (ObsId z = 0; z < num_observations(); ++z) {
                    double* row = joint_.data() + joint_index(a, s, z, 0);
                    for (StateId s2 = 0; s2 < S; ++s2) {
                        row[s2] = observation(a, s2, z) * transition(a, s, s2);
                    }
                }
            }
        }
    }

    ModelData data_;
    std::vector<double> joint_;
};

/// Smallest immediate reward over all (s, a).
inline double min_reward(const PomdpModel& model) {
    return *std::min_element(model.data().reward.begin(), model.data().reward.end());
}

/// Largest |r(s, a)|.
inline double max_abs_reward(const PomdpModel& model) {
    double m = 0.0;
    for (double r : model.data().reward) {
        m = std::max(m, std::abs(r));
    }
    return m;
}

}  // namespace pbvi
