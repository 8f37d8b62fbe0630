#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pbvi/errors.hpp"

namespace pbvi::detail {

struct SimplexSolution {
    std::vector<double> x;
    double objective = 0.0;
};

/// Dense primal tableau simplex for
///
///     maximize c.x  subject to  A x <= rhs,  x >= 0,  with rhs >= 0,
///
/// so the slack basis is feasible and no phase one is needed. Entering columns
/// follow Dantzig's rule and switch to Bland's rule after a run of degenerate
/// pivots. Ratio-test ties always go to the lowest basic variable index, which
/// makes the returned vertex a deterministic function of the input. The
/// tableau is kept in extended precision: witness LPs over nearly parallel
/// vectors are badly conditioned and lose several digits in double.
class DenseSimplex {
public:
    using Real = long double;

    static constexpr double kCostEps = 1e-11;
    static constexpr double kPivotEps = 1e-12;

    DenseSimplex(std::size_t rows, std::size_t cols)
        : m_(rows), n_(cols), width_(cols + rows + 1), tab_((rows + 1) * (cols + rows + 1), 0.0), basis_(rows) {
        for (std::size_t i = 0; i < m_; ++i) {
            at(i, n_ + i) = 1.0;
            basis_[i] = n_ + i;
        }
    }

    void set_coefficient(std::size_t row, std::size_t col, double v) { at(row, col) = v; }
    void set_rhs(std::size_t row, double v) { at(row, width_ - 1) = v < 0.0 ? 0.0 : v; }
    void set_objective(std::size_t col, double v) { at(m_, col) = -v; }

    SimplexSolution maximize() {
        const std::size_t limit = 50 * (m_ + n_) + 100;
        std::size_t degenerate_run = 0;
        for (std::size_t iter = 0; iter < limit; ++iter) {
            const bool bland = degenerate_run > m_ + n_;
            const std::size_t enter = choose_entering(bland);
            if (enter == kNone) {
                return extract();
            }
            const std::size_t leave = choose_leaving(enter);
            if (leave == kNone) {
                throw LpError("simplex: objective unbounded");
            }
            degenerate_run = at(leave, width_ - 1) <= kPivotEps ? degenerate_run + 1 : 0;
            pivot(leave, enter);
        }
        throw LpError("simplex: iteration limit reached");
    }

private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    Real& at(std::size_t r, std::size_t c) { return tab_[r * width_ + c]; }

    std::size_t choose_entering(bool bland) {
        std::size_t best = kNone;
        Real most_negative = -kCostEps;
        for (std::size_t j = 0; j + 1 < width_; ++j) {
            const Real d = at(m_, j);
            if (d < -kCostEps) {
                if (bland) {
                    return j;
                }
                if (d < most_negative) {
                    most_negative = d;
                    best = j;
                }
            }
        }
        return best;
    }

    std::size_t choose_leaving(std::size_t enter) {
        std::size_t best = kNone;
        Real best_ratio = INFINITY;
        for (std::size_t i = 0; i < m_; ++i) {
            const Real a = at(i, enter);
            if (a <= kPivotEps) {
                continue;
            }
            const Real ratio = at(i, width_ - 1) / a;
            if (best == kNone || ratio < best_ratio - 1e-14 ||
                (ratio <= best_ratio + 1e-14 && basis_[i] < basis_[best])) {
                best = i;
                best_ratio = ratio;
            }
        }
        return best;
    }

    void pivot(std::size_t row, std::size_t col) {
        const Real p = at(row, col);
        Real* prow = &tab_[row * width_];
        for (std::size_t j = 0; j < width_; ++j) {
            prow[j] /= p;
        }
        prow[col] = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == row) {
                continue;
            }
            Real* r = &tab_[i * width_];
            const Real f = r[col];
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < width_; ++j) {
                r[j] -= f * prow[j];
            }
            r[col] = 0.0;
            if (i < m_ && r[width_ - 1] < 0.0) {
                r[width_ - 1] = 0.0;
            }
        }
        basis_[row] = col;
    }

    SimplexSolution extract() {
        SimplexSolution out;
        out.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) {
                out.x[basis_[i]] = static_cast<double>(at(i, width_ - 1));
            }
        }
        out.objective = static_cast<double>(at(m_, width_ - 1));
        return out;
    }

    std::size_t m_;
    std::size_t n_;
    std::size_t width_;
    std::vector<Real> tab_;
    std::vector<std::size_t> basis_;
};

}  // namespace pbvi::detail
