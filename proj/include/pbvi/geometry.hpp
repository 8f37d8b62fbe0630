#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pbvi/belief.hpp"
#include "pbvi/model.hpp"

namespace pbvi {

/// One linear piece of a value function: the vector, the action that
/// produced it, and optionally a belief where it attains the set maximum.
struct AlphaVector {
    std::vector<double> values;
    ActionId action = 0;
    std::optional<Belief> witness;

    double dot(const Belief& b) const { return pbvi::dot(values, b.probs()); }
};

/// True when x and y agree component-wise within tol.
inline bool approx_equal(std::span<const double> x, std::span<const double> y, double tol) {
    for (std::size_t s = 0; s < x.size(); ++s) {
        if (std::abs(x[s] - y[s]) > tol) {
            return false;
        }
    }
    return true;
}

/// True when x(s) >= y(s) - tol for every s.
inline bool pointwise_dominates(std::span<const double> x, std::span<const double> y, double tol) {
    for (std::size_t s = 0; s < x.size(); ++s) {
        if (x[s] < y[s] - tol) {
            return false;
        }
    }
    return true;
}

/// Strict lexicographic comparison in state order.
inline bool lex_greater(std::span<const double> x, std::span<const double> y) {
    return std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end());
}

/// Ordered collection of alpha vectors inducing b -> max_alpha alpha . b.
class VectorSet {
public:
    explicit VectorSet(double tolerance = kDefaultTolerance) : tolerance_(tolerance) {}
    VectorSet(std::vector<AlphaVector> vectors, double tolerance) : vectors_(std::move(vectors)), tolerance_(tolerance) {}

    double tolerance() const noexcept { return tolerance_; }
    std::size_t size() const noexcept { return vectors_.size(); }
    bool empty() const noexcept { return vectors_.empty(); }

    const AlphaVector& operator[](std::size_t i) const { return vectors_[i]; }
    AlphaVector& operator[](std::size_t i) { return vectors_[i]; }

    auto begin() const { return vectors_.begin(); }
    auto end() const { return vectors_.end(); }
    auto begin() { return vectors_.begin(); }
    auto end() { return vectors_.end(); }

    const std::vector<AlphaVector>& vectors() const noexcept { return vectors_; }

    /// Appends without a duplicate check.
    void push_back(AlphaVector v) { vectors_.push_back(std::move(v)); }

    /// Index of a member equal to v within tolerance, if any.
    std::optional<std::size_t> find(std::span<const double> v) const {
        for (std::size_t i = 0; i < vectors_.size(); ++i) {
            if (approx_equal(vectors_[i].values, v, tolerance_)) {
                return i;
            }
        }
        return std::nullopt;
    }

    /// Appends v unless an equal member (within tolerance) is already present.
    bool insert_unique(AlphaVector v) {
        if (find(v.values)) {
            return false;
        }
        vectors_.push_back(std::move(v));
        return true;
    }

    void erase(std::size_t i) { vectors_.erase(vectors_.begin() + static_cast<std::ptrdiff_t>(i)); }

private:
    std::vector<AlphaVector> vectors_;
    double tolerance_;
};

/// Index of the candidate maximizing alpha . b. Candidates within tol of the
/// maximum are tied and resolved by the lexicographically greatest vector.
inline std::size_t lex_max_index(std::span<const AlphaVector> candidates, const Belief& b, double tol) {
    if (candidates.empty()) {
        throw std::invalid_argument("lex_max over an empty candidate set");
    }
    std::vector<double> dots(candidates.size());
    double best = -INFINITY;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        dots[i] = candidates[i].dot(b);
        best = std::max(best, dots[i]);
    }
    std::size_t pick = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (dots[i] < best - tol) {
            continue;
        }
        if (pick == candidates.size() || lex_greater(candidates[i].values, candidates[pick].values)) {
            pick = i;
        }
    }
    return pick;
}

inline const AlphaVector& lex_max(std::span<const AlphaVector> candidates, const Belief& b, double tol) {
    return candidates[lex_max_index(candidates, b, tol)];
}

struct Evaluation {
    double value;
    std::size_t index;
};

/// Induced value max_alpha alpha . b and the lexicographically selected maximizer.
inline Evaluation evaluate(const VectorSet& set, const Belief& b) {
    if (set.empty()) {
        throw std::invalid_argument("evaluate on an empty vector set");
    }
    const std::size_t index = lex_max_index(set.vectors(), b, set.tolerance());
    double best = -INFINITY;
    for (const auto& v : set) {
        best = std::max(best, v.dot(b));
    }
    return {best, index};
}

inline double value_at(const VectorSet& set, const Belief& b) {
    double best = -INFINITY;
    for (const auto& v : set) {
        best = std::max(best, v.dot(b));
    }
    return best;
}

/// Removes members pointwise dominated (within tolerance) by another member.
/// Of mutually equal members the earliest survives; survivors keep their order.
inline VectorSet pointwise_prune(const VectorSet& set) {
    const double tol = set.tolerance();
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& beta = set[i].values;
        bool dominated = false;
        for (std::size_t k : kept) {
            if (pointwise_dominates(set[k].values, beta, tol)) {
                dominated = true;
                break;
            }
        }
        if (dominated) {
            continue;
        }
        std::erase_if(kept, [&](std::size_t k) { return pointwise_dominates(beta, set[k].values, tol); });
        kept.push_back(i);
    }
    VectorSet out(set.tolerance());
    for (std::size_t k : kept) {
        out.push_back(set[k]);
    }
    return out;
}

}  // namespace pbvi
