#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "convexcert/errors.hpp"
#include "convexcert/geometry.hpp"
#include "convexcert/point_set.hpp"

namespace convexcert::reduction {

using numerics::Vector;

enum class ReductionMode { Faithful, Fast };

/// Support subset J, its verifying combination, and the removal order that
/// produced it. |J| <= d+1 for Caratheodory output, |J| <= 2d for Steinitz.
struct ReductionResult {
    std::vector<std::size_t> support;
    ConvexCombination witness;
    std::vector<std::size_t> removal_trace;
    std::size_t bound = 0;
};

namespace detail {

/// Candidate removal order: ascending index, except that inside a group of
/// coordinate-identical points the higher indices come first.
inline std::vector<std::size_t> removal_candidates(const PointSet& ps,
                                                   const std::vector<std::size_t>& idx)
{
    auto same_point = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < ps.dim; ++i)
            if (ps[a][i] != ps[b][i]) return false;
        return true;
    };
    // group key: the smallest index whose point equals this one
    std::vector<std::size_t> group(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        group[k] = idx[k];
        for (std::size_t m = 0; m < k; ++m) {
            if (same_point(idx[m], idx[k])) {
                group[k] = group[m];
                break;
            }
        }
    }
    std::vector<std::size_t> order(idx.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (group[a] != group[b]) return group[a] < group[b];
        return idx[a] > idx[b];
    });
    std::vector<std::size_t> out;
    out.reserve(idx.size());
    for (std::size_t k : order) out.push_back(idx[k]);
    return out;
}

/// One affine-dependence pivot: given strictly positive weights over
/// `support` combining to the origin, zero out one weight while keeping the
/// rest nonnegative. Returns the index (into support) that vanished.
inline std::size_t pivot_step(const PointSet& ps, std::vector<std::size_t>& support,
                              Vector& weights)
{
    const std::size_t m = support.size();
    const std::size_t d = ps.dim;
    // Null-space vector of the (d+1) x m homogeneous system [V; 1] a = 0,
    // found by Gaussian elimination with partial pivoting.
    std::vector<Vector> rows(d + 1, Vector(m, 0.0));
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t r = 0; r < d; ++r) rows[r][c] = ps[support[c]][r];
        rows[d][c] = 1.0;
    }
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m && row < d + 1; ++col) {
        std::size_t piv = row;
        for (std::size_t r = row + 1; r < d + 1; ++r)
            if (std::abs(rows[r][col]) > std::abs(rows[piv][col])) piv = r;
        if (std::abs(rows[piv][col]) < 1e-12) continue;
        std::swap(rows[row], rows[piv]);
        const double p = rows[row][col];
        for (double& v : rows[row]) v /= p;
        for (std::size_t r = 0; r < d + 1; ++r) {
            if (r == row) continue;
            const double f = rows[r][col];
            if (f == 0.0) continue;
            for (std::size_t c2 = 0; c2 < m; ++c2) rows[r][c2] -= f * rows[row][c2];
        }
        pivot_col.push_back(col);
        ++row;
    }
    require(pivot_col.size() < m, Errc::InternalError,
            "pivot_step: no affine dependence although m > d+1");
    // First free column yields the null vector.
    std::size_t free_col = 0;
    {
        std::vector<bool> is_pivot(m, false);
        for (std::size_t c : pivot_col) is_pivot[c] = true;
        while (is_pivot[free_col]) ++free_col;
    }
    Vector alpha(m, 0.0);
    alpha[free_col] = 1.0;
    for (std::size_t r = 0; r < pivot_col.size(); ++r)
        alpha[pivot_col[r]] = -rows[r][free_col];

    // Ensure some alpha is positive so the ratio test is well posed.
    double apos = 0.0;
    for (double a : alpha) apos = std::max(apos, a);
    if (apos <= 0.0)
        for (double& a : alpha) a = -a;

    // Ratio test: weights - t * alpha stays nonnegative, one entry hits zero.
    double t = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k)
        if (alpha[k] > 1e-14) t = std::min(t, weights[k] / alpha[k]);
    require(std::isfinite(t), Errc::InternalError, "pivot_step: unbounded ratio test");

    // Vanishing candidates; drop the one with the smallest current weight,
    // then the smallest index.
    std::size_t drop = m;
    for (std::size_t k = 0; k < m; ++k) {
        if (alpha[k] > 1e-14 && weights[k] - t * alpha[k] <= 1e-13) {
            if (drop == m || weights[k] < weights[drop] ||
                (weights[k] == weights[drop] && support[k] < support[drop]))
                drop = k;
        }
    }
    require(drop < m, Errc::InternalError, "pivot_step: ratio test found no vanish");

    double wsum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        weights[k] = std::max(0.0, weights[k] - t * alpha[k]);
        if (k != drop) wsum += weights[k];
    }
    const std::size_t removed = support[drop];
    support.erase(support.begin() + static_cast<std::ptrdiff_t>(drop));
    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(drop));
    for (double& w : weights) w /= wsum;
    return removed;
}

} // namespace detail

/// Caratheodory reduction: shrink a verified convex-combination witness of
/// the origin to a support of size at most d+1.
///
/// Faithful mode mirrors the induction: while more than d+1 points remain,
/// remove one whose deletion keeps the origin inside the hull. Fast mode
/// pivots along affine dependences until at most d+1 weights survive.
inline ReductionResult reduce_caratheodory(const PointSet& ps, const ConvexCombination& witness,
                                           ReductionMode mode = ReductionMode::Fast,
                                           const geometry::GeometryConfig& cfg = {})
{
    require(ps.size() >= 1, Errc::InvalidInput, "reduce_caratheodory: empty point set");
    require(combination_verifies(ps, witness, cfg.membership_tol * 10.0), Errc::WitnessInvalid,
            "reduce_caratheodory: witness does not verify");
    const std::size_t d = ps.dim;

    ReductionResult out;
    out.bound = d + 1;
    std::vector<std::size_t> support = witness.support;
    Vector weights = witness.weights;

    if (mode == ReductionMode::Fast) {
        while (support.size() > d + 1)
            out.removal_trace.push_back(detail::pivot_step(ps, support, weights));
        // Ratio-test ties can leave residual weights at roundoff level.
        std::vector<std::size_t> kept;
        Vector kept_w;
        double wsum = 0.0;
        for (std::size_t k = 0; k < support.size(); ++k) {
            if (weights[k] > 1e-14) {
                kept.push_back(support[k]);
                kept_w.push_back(weights[k]);
                wsum += weights[k];
            }
        }
        for (double& w : kept_w) w /= wsum;
        out.support = kept;
        out.witness.support = std::move(kept);
        out.witness.weights = std::move(kept_w);
    } else {
        while (support.size() > d + 1) {
            const auto candidates = detail::removal_candidates(ps, support);
            bool removed = false;
            for (std::size_t j : candidates) {
                std::vector<std::size_t> trial;
                trial.reserve(support.size() - 1);
                for (std::size_t idx : support)
                    if (idx != j) trial.push_back(idx);
                geometry::MembershipVerdict v;
                try {
                    v = geometry::contains_origin(ps.subset(trial), cfg);
                } catch (const Error&) {
                    continue; // borderline or solver trouble: not removable
                }
                if (v.status != geometry::Membership::Inside) continue;
                // remap the witness to original indices
                ConvexCombination cc;
                for (std::size_t k = 0; k < v.inside->support.size(); ++k) {
                    cc.support.push_back(trial[v.inside->support[k]]);
                    cc.weights.push_back(v.inside->weights[k]);
                }
                support = cc.support;
                weights = cc.weights;
                out.removal_trace.push_back(j);
                removed = true;
                break;
            }
            require(removed, Errc::InternalError,
                    "reduce_caratheodory: no removable point although n > d+1");
        }
        out.support = support;
        out.witness.support = support;
        out.witness.weights = weights;
    }

    require(out.support.size() <= d + 1, Errc::InternalError,
            "reduce_caratheodory: support bound violated");
    require(combination_verifies(ps, out.witness, cfg.membership_tol * 10.0),
            Errc::InternalError, "reduce_caratheodory: reduced witness fails to verify");
    return out;
}

/// Steinitz reduction: keep the origin interior while shrinking to at most
/// 2d points. Scans removal candidates in ascending index order (duplicates
/// highest-first) and drops the first point whose removal keeps interiority.
inline ReductionResult reduce_steinitz(const PointSet& ps,
                                       const geometry::GeometryConfig& cfg = {})
{
    require(ps.size() >= 1, Errc::InvalidInput, "reduce_steinitz: empty point set");
    const std::size_t d = ps.dim;

    auto full = geometry::is_interior(ps, cfg);
    require(full.status == geometry::Interiority::Interior, Errc::NotInteriorInput,
            "reduce_steinitz: origin is not interior to the input hull");

    ReductionResult out;
    out.bound = 2 * d;
    std::vector<std::size_t> support(ps.size());
    std::iota(support.begin(), support.end(), std::size_t{0});
    ConvexCombination current = *full.witness; // witness over all indices

    while (support.size() > 2 * d) {
        const auto candidates = detail::removal_candidates(ps, support);
        bool removed = false;
        for (std::size_t j : candidates) {
            std::vector<std::size_t> trial;
            trial.reserve(support.size() - 1);
            for (std::size_t idx : support)
                if (idx != j) trial.push_back(idx);
            geometry::InteriorVerdict v;
            try {
                v = geometry::is_interior(ps.subset(trial), cfg);
            } catch (const Error&) {
                continue; // rank-band or solver trouble: treat as not removable
            }
            if (v.status != geometry::Interiority::Interior) continue;
            ConvexCombination cc;
            for (std::size_t k = 0; k < v.witness->support.size(); ++k) {
                cc.support.push_back(trial[v.witness->support[k]]);
                cc.weights.push_back(v.witness->weights[k]);
            }
            support = trial;
            current = std::move(cc);
            out.removal_trace.push_back(j);
            removed = true;
            break;
        }
        require(removed, Errc::InternalError,
                "reduce_steinitz: no removable point although n > 2d");
    }

    out.support = support;
    out.witness = current;
    require(out.support.size() <= 2 * d, Errc::InternalError,
            "reduce_steinitz: support bound violated");
    return out;
}

} // namespace convexcert::reduction
