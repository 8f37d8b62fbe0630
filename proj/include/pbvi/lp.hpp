#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pbvi/belief.hpp"
#include "pbvi/geometry.hpp"
#include "pbvi/simplex.hpp"

namespace pbvi {

/// Optimum of the witness LP: the largest margin by which beta beats every
/// member of U at a single belief, and a belief attaining it.
struct LpOutcome {
    double objective;
    Belief point;
};

/// Solves
///     maximize x  s.t.  beta.b >= x + alpha.b  for all alpha in U,  b in the simplex.
///
/// b(0) is eliminated through sum b = 1 and x is shifted to be non-negative, so
/// the remaining LP is in <=-form with a feasible origin (b = e_0).
inline LpOutcome witness_lp(std::span<const double> beta, const VectorSet& U) {
    if (U.empty()) {
        throw std::invalid_argument("witness_lp needs a nonempty comparison set");
    }
    const std::size_t S = beta.size();
    const std::size_t y_col = S - 1;

    double max_diff = 0.0;  // max over alpha, s of alpha(s) - beta(s), floored at 0
    for (const auto& alpha : U) {
        for (std::size_t s = 0; s < S; ++s) {
            max_diff = std::max(max_diff, alpha.values[s] - beta[s]);
        }
    }
    // x = y - max_diff with y >= 0; the optimum always has x >= -max_diff.
    detail::DenseSimplex lp(U.size() + 1, S);
    for (std::size_t r = 0; r < U.size(); ++r) {
        const auto& alpha = U[r].values;
        const double d0 = alpha[0] - beta[0];
        for (std::size_t s = 1; s < S; ++s) {
            lp.set_coefficient(r, s - 1, (alpha[s] - beta[s]) - d0);
        }
        lp.set_coefficient(r, y_col, 1.0);
        lp.set_rhs(r, max_diff - d0);
    }
    for (std::size_t s = 1; s < S; ++s) {
        lp.set_coefficient(U.size(), s - 1, 1.0);
    }
    lp.set_rhs(U.size(), 1.0);
    lp.set_objective(y_col, 1.0);

    const auto sol = lp.maximize();

    std::vector<double> b(S, 0.0);
    double rest = 0.0;
    for (std::size_t s = 1; s < S; ++s) {
        b[s] = std::max(0.0, sol.x[s - 1]);
        rest += b[s];
    }
    b[0] = std::max(0.0, 1.0 - rest);
    const double total = b[0] + rest;
    for (auto& p : b) {
        p /= total;
    }
    Belief point(std::move(b));

    double objective = INFINITY;
    for (const auto& alpha : U) {
        objective = std::min(objective, dot(beta, point.probs()) - alpha.dot(point));
    }
    return {objective, point};
}

inline LpOutcome witness_lp(const AlphaVector& beta, const VectorSet& U) { return witness_lp(beta.values, U); }

/// Looks for a belief where beta beats U. Returns nullopt when some member of U
/// pointwise dominates beta (no LP is solved) or, with strict_positive, when the
/// LP margin does not exceed the tolerance. Without strict_positive the LP point
/// is returned whatever its margin.
inline std::optional<Belief> dominance_check(const AlphaVector& beta, const VectorSet& U, bool strict_positive = true) {
    if (U.empty()) {
        return Belief::vertex(beta.values.size(), 0);
    }
    for (const auto& alpha : U) {
        if (pointwise_dominates(alpha.values, beta.values, U.tolerance())) {
            return std::nullopt;
        }
    }
    auto outcome = witness_lp(beta, U);
    if (strict_positive && outcome.objective <= U.tolerance()) {
        return std::nullopt;
    }
    return std::move(outcome.point);
}

/// max_b (U(b) - V(b)), signed.
inline double residual_one_sided(const VectorSet& U, const VectorSet& V) {
    if (U.empty() || V.empty()) {
        throw std::invalid_argument("residual of an empty vector set");
    }
    double best = -INFINITY;
    for (const auto& alpha : U) {
        best = std::max(best, witness_lp(alpha, V).objective);
    }
    return best;
}

/// Sup-norm distance max_b |U(b) - V(b)|.
inline double bellman_residual(const VectorSet& U, const VectorSet& V) {
    return std::max(residual_one_sided(U, V), residual_one_sided(V, U));
}

}  // namespace pbvi
