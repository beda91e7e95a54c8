#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "convexcert/errors.hpp"
#include "convexcert/matrix.hpp"

namespace convexcert::numerics {

enum class Sense { LessEqual, Equal, GreaterEqual };

enum class LpStatus { Optimal, Infeasible, Unbounded };

constexpr double kInf = std::numeric_limits<double>::infinity();

/// maximize objective . x  subject to  constraints x {<=,=,>=} rhs  and
/// lower <= x <= upper (entries may be +-inf).
struct LpProblem {
    Vector objective;
    Matrix constraints; // m x n
    std::vector<Sense> senses;
    Vector rhs;
    Vector lower; // defaults to 0 when empty
    Vector upper; // defaults to +inf when empty
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    Vector solution;
};

namespace detail {

struct Tableau {
    // rows x cols dense tableau, last column is rhs, last row is the
    // (phase-specific) objective in reduced form.
    std::vector<Vector> t;
    std::vector<std::size_t> basis; // basic variable per structural row
    std::size_t m = 0;              // structural rows
    std::size_t n = 0;              // columns excluding rhs
};

inline void pivot(Tableau& tab, std::size_t row, std::size_t col)
{
    auto& t = tab.t;
    const double p = t[row][col];
    for (double& v : t[row]) v /= p;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i == row) continue;
        const double f = t[i][col];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j <= tab.n; ++j) t[i][j] -= f * t[row][j];
    }
    tab.basis[row] = col;
}

/// Bland's rule: entering = lowest-index column (below enter_limit) with
/// negative reduced cost, leaving = min ratio with lowest basis index on
/// ties. Returns false on unboundedness.
inline bool simplex_min(Tableau& tab, std::size_t enter_limit, double eps)
{
    const std::size_t obj = tab.m;
    const std::size_t max_pivots = 50000 + 50 * (tab.m + tab.n);
    for (std::size_t iter = 0;; ++iter) {
        require(iter < max_pivots, Errc::SolverFailure, "simplex: pivot limit hit");
        std::size_t enter = tab.n;
        for (std::size_t j = 0; j < enter_limit; ++j) {
            if (tab.t[obj][j] < -eps) {
                enter = j;
                break;
            }
        }
        if (enter == tab.n) return true; // optimal

        std::size_t leave = tab.m;
        double best_ratio = kInf;
        for (std::size_t i = 0; i < tab.m; ++i) {
            const double a = tab.t[i][enter];
            if (a > eps) {
                const double ratio = tab.t[i][tab.n] / a;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && leave < tab.m &&
                     tab.basis[i] < tab.basis[leave])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave == tab.m) return false; // unbounded direction
        pivot(tab, leave, enter);
    }
}

} // namespace detail

/// Two-phase dense simplex with Bland's anti-cycling rule. Deterministic:
/// fixed pivot choices, no randomized perturbation.
inline LpResult lp_solve(const LpProblem& p, double feas_tol = 1e-9)
{
    const std::size_t n_orig = p.objective.size();
    const std::size_t m = p.rhs.size();
    require(p.constraints.rows() == m && (m == 0 || p.constraints.cols() == n_orig),
            Errc::InvalidInput, "lp_solve: constraint shape mismatch");
    require(p.senses.size() == m, Errc::InvalidInput, "lp_solve: senses size mismatch");
    Vector lower = p.lower.empty() ? Vector(n_orig, 0.0) : p.lower;
    Vector upper = p.upper.empty() ? Vector(n_orig, kInf) : p.upper;
    require(lower.size() == n_orig && upper.size() == n_orig, Errc::InvalidInput,
            "lp_solve: bound size mismatch");
    for (std::size_t j = 0; j < n_orig; ++j)
        require(lower[j] <= upper[j], Errc::InvalidInput, "lp_solve: empty bound interval");

    // Standard-form variables: each original variable becomes one or two
    // nonnegative columns plus an optional shift.
    struct VarMap {
        std::size_t pos;         // column of the positive part
        std::size_t neg;         // column of the negative part (free vars only)
        double shift;            // x = shift + sign*(x_pos [- x_neg])
        double sign;             // +1, or -1 for upper-bounded-only vars
        bool split;
    };
    std::vector<VarMap> vmap(n_orig);
    std::size_t n_std = 0;
    std::size_t extra_rows = 0; // finite two-sided bounds become <= rows
    for (std::size_t j = 0; j < n_orig; ++j) {
        auto& vm = vmap[j];
        if (std::isfinite(lower[j])) {
            vm = {n_std++, 0, lower[j], +1.0, false};
            if (std::isfinite(upper[j])) ++extra_rows;
        } else if (std::isfinite(upper[j])) {
            vm = {n_std++, 0, upper[j], -1.0, false};
        } else {
            vm = {n_std, n_std + 1, 0.0, +1.0, true};
            n_std += 2;
        }
    }

    const std::size_t m_all = m + extra_rows;
    // Row-major structural system A x_std (sense) b
    std::vector<Vector> a(m_all, Vector(n_std, 0.0));
    Vector b(m_all, 0.0);
    std::vector<Sense> senses(m_all);

    auto scatter = [&](std::size_t row, std::size_t j, double coeff) {
        const auto& vm = vmap[j];
        a[row][vm.pos] += coeff * vm.sign;
        if (vm.split) a[row][vm.neg] -= coeff;
    };

    for (std::size_t i = 0; i < m; ++i) {
        double rhs = p.rhs[i];
        for (std::size_t j = 0; j < n_orig; ++j) {
            const double c = p.constraints(i, j);
            if (c == 0.0) continue;
            scatter(i, j, c);
            rhs -= c * vmap[j].shift;
        }
        b[i] = rhs;
        senses[i] = p.senses[i];
    }
    {
        std::size_t row = m;
        for (std::size_t j = 0; j < n_orig; ++j) {
            if (std::isfinite(lower[j]) && std::isfinite(upper[j])) {
                a[row][vmap[j].pos] = 1.0;
                b[row] = upper[j] - lower[j];
                senses[row] = Sense::LessEqual;
                ++row;
            }
        }
    }

    // Slacks/surplus, then artificials where no natural basis column exists.
    std::size_t n_cols = n_std;
    std::vector<std::ptrdiff_t> slack_col(m_all, -1);
    for (std::size_t i = 0; i < m_all; ++i)
        if (senses[i] != Sense::Equal) slack_col[i] = static_cast<std::ptrdiff_t>(n_cols++);

    // Normalize rhs to be nonnegative.
    for (std::size_t i = 0; i < m_all; ++i) {
        if (b[i] < 0.0) {
            for (double& v : a[i]) v = -v;
            b[i] = -b[i];
            if (senses[i] == Sense::LessEqual)
                senses[i] = Sense::GreaterEqual;
            else if (senses[i] == Sense::GreaterEqual)
                senses[i] = Sense::LessEqual;
        }
    }

    std::vector<std::ptrdiff_t> art_col(m_all, -1);
    std::size_t n_art = 0;
    for (std::size_t i = 0; i < m_all; ++i) {
        const bool slack_is_basis = senses[i] == Sense::LessEqual;
        if (!slack_is_basis) art_col[i] = static_cast<std::ptrdiff_t>(n_cols + n_art++);
    }
    const std::size_t n_total = n_cols + n_art;

    detail::Tableau tab;
    tab.m = m_all;
    tab.n = n_total;
    tab.t.assign(m_all + 1, Vector(n_total + 1, 0.0));
    tab.basis.assign(m_all, 0);
    for (std::size_t i = 0; i < m_all; ++i) {
        for (std::size_t j = 0; j < n_std; ++j) tab.t[i][j] = a[i][j];
        if (slack_col[i] >= 0)
            tab.t[i][static_cast<std::size_t>(slack_col[i])] =
                senses[i] == Sense::LessEqual ? 1.0 : -1.0;
        if (art_col[i] >= 0) {
            tab.t[i][static_cast<std::size_t>(art_col[i])] = 1.0;
            tab.basis[i] = static_cast<std::size_t>(art_col[i]);
        } else {
            tab.basis[i] = static_cast<std::size_t>(slack_col[i]);
        }
        tab.t[i][n_total] = b[i];
    }

    const double eps = 1e-11;

    // Phase 1: minimize the sum of artificials.
    if (n_art > 0) {
        auto& obj = tab.t[m_all];
        for (std::size_t i = 0; i < m_all; ++i) {
            if (art_col[i] < 0) continue;
            for (std::size_t j = 0; j <= n_total; ++j) obj[j] -= tab.t[i][j];
        }
        // Reduced costs of the basic artificials are zero by construction.
        for (std::size_t k = 0; k < n_art; ++k) obj[n_cols + k] = 0.0;
        if (!detail::simplex_min(tab, n_cols, eps))
            raise(Errc::SolverFailure, "lp_solve: phase-1 unbounded");
        const double art_sum = -tab.t[m_all][n_total];
        if (art_sum > feas_tol) return {LpStatus::Infeasible, 0.0, {}};
        // Pivot remaining artificials out of the basis (or their rows are
        // redundant and stay at zero level).
        for (std::size_t i = 0; i < m_all; ++i) {
            if (tab.basis[i] < n_cols) continue;
            std::size_t enter = n_cols;
            for (std::size_t j = 0; j < n_cols; ++j) {
                if (std::abs(tab.t[i][j]) > 1e-9) {
                    enter = j;
                    break;
                }
            }
            if (enter < n_cols) detail::pivot(tab, i, enter);
        }
    }

    // Phase 2: minimize -objective over the non-artificial columns.
    {
        auto& obj = tab.t[m_all];
        for (double& v : obj) v = 0.0;
        for (std::size_t j = 0; j < n_orig; ++j) {
            const double c = p.objective[j];
            if (c == 0.0) continue;
            const auto& vm = vmap[j];
            obj[vm.pos] += -c * vm.sign; // minimizing the negated objective
            if (vm.split) obj[vm.neg] += c;
        }
        // Reduce against the current basis (basis columns are unit columns,
        // so a single pass suffices).
        for (std::size_t i = 0; i < m_all; ++i) {
            const double f = obj[tab.basis[i]];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n_total; ++j) obj[j] -= f * tab.t[i][j];
        }
        for (std::size_t i = 0; i < m_all; ++i) {
            if (tab.basis[i] >= n_cols && tab.t[i][n_total] > feas_tol)
                raise(Errc::SolverFailure, "lp_solve: artificial stuck at positive level");
        }

        if (!detail::simplex_min(tab, n_cols, eps)) return {LpStatus::Unbounded, 0.0, {}};

        Vector x_std(n_total, 0.0);
        for (std::size_t i = 0; i < m_all; ++i) x_std[tab.basis[i]] = tab.t[i][n_total];

        Vector x(n_orig, 0.0);
        for (std::size_t j = 0; j < n_orig; ++j) {
            const auto& vm = vmap[j];
            double v = vm.sign * x_std[vm.pos] + vm.shift;
            if (vm.split) v -= x_std[vm.neg];
            x[j] = v;
        }
        double value = 0.0;
        for (std::size_t j = 0; j < n_orig; ++j) value += p.objective[j] * x[j];
        return {LpStatus::Optimal, value, std::move(x)};
    }
}

/// Constraint violation of a candidate solution: max over rows and bound
/// violations. Used by callers that audit solver output.
inline double lp_violation(const LpProblem& p, const Vector& x)
{
    double viol = 0.0;
    for (std::size_t i = 0; i < p.rhs.size(); ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) ax += p.constraints(i, j) * x[j];
        switch (p.senses[i]) {
            case Sense::LessEqual: viol = std::max(viol, ax - p.rhs[i]); break;
            case Sense::GreaterEqual: viol = std::max(viol, p.rhs[i] - ax); break;
            case Sense::Equal: viol = std::max(viol, std::abs(ax - p.rhs[i])); break;
        }
    }
    const Vector& lo = p.lower;
    const Vector& up = p.upper;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!lo.empty() && std::isfinite(lo[j])) viol = std::max(viol, lo[j] - x[j]);
        if (!up.empty() && std::isfinite(up[j])) viol = std::max(viol, x[j] - up[j]);
        if (lo.empty()) viol = std::max(viol, -x[j]);
    }
    return viol;
}

} // namespace convexcert::numerics
