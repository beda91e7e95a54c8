#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "convexcert/eigen.hpp"
#include "convexcert/errors.hpp"
#include "convexcert/lp.hpp"
#include "convexcert/matrix.hpp"
#include "convexcert/point_set.hpp"

namespace convexcert::geometry {

using numerics::Matrix;
using numerics::Vector;

enum class SepMode { Strict, Weak };
enum class Provenance { Direct, PerronBuilt };

/// A direction y with all <v_i, y> > 0 (Strict) or >= 0 with y != 0 (Weak),
/// certifying non-membership / non-interiority of the origin.
struct SeparatorCertificate {
    Vector y;
    SepMode mode = SepMode::Strict;
    double margin = 0.0; // min_i <v_i, y> / ||y||_2
    Provenance provenance = Provenance::Direct;
};

inline double separator_margin(const PointSet& ps, const Vector& y)
{
    const double ny = numerics::norm2(y);
    if (ny == 0.0) return 0.0;
    double m = std::numeric_limits<double>::infinity();
    for (const auto& v : ps.points) m = std::min(m, numerics::dot(v, y) / ny);
    return m;
}

struct GeometryConfig {
    double membership_tol = 1e-9;  // ||min-norm point|| <= tol means Inside
    double interior_tol = 1e-9;    // LP optimum delta* > tol means Interior
    double separation_tol = 1e-9;  // weak margin slack
    double lp_feas_tol = 1e-9;
    double wolfe_tol = 1e-12;      // optimality slack scale for Wolfe
    double rank_rel_sigma = 1e-7;  // affine-span rank threshold (on sigma)
};

struct MinNormResult {
    Vector point;              // the min-norm point v of conv(ps)
    ConvexCombination witness; // v = sum of weights * points
};

namespace detail {

/// Min-norm point of the affine hull of the given columns: minimize
/// ||S a||^2 subject to sum(a) = 1, a free. KKT system solved densely.
inline Vector affine_min_norm(const PointSet& ps, const std::vector<std::size_t>& idx)
{
    const std::size_t m = idx.size();
    Matrix k(m + 1, m + 1);
    Vector rhs(m + 1, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            const double d = numerics::dot(ps[idx[a]], ps[idx[b]]);
            k(a, b) = d;
            k(b, a) = d;
        }
        k(a, m) = 1.0;
        k(m, a) = 1.0;
    }
    rhs[m] = 1.0;
    Vector sol = numerics::solve_linear(std::move(k), std::move(rhs));
    sol.resize(m); // drop the multiplier
    return sol;
}

} // namespace detail

/// Wolfe's minimum-norm-point method over conv(ps): major cycles add the
/// most violating vertex, minor cycles restore a corral by line search.
/// Terminates with the optimality condition <v, v_i> >= ||v||^2 - tol.
inline MinNormResult min_norm_point(const PointSet& ps, const GeometryConfig& cfg = {})
{
    require(ps.size() >= 1, Errc::InvalidInput, "min_norm_point: empty point set");
    const std::size_t n = ps.size();
    const std::size_t d = ps.dim;

    double scale = 1.0;
    for (const auto& v : ps.points) scale = std::max(scale, numerics::dot(v, v));
    const double opt_tol = cfg.wolfe_tol * scale;
    const double drop_tol = 1e-12;

    // Start from the point of smallest norm (lowest index on ties).
    std::size_t start = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (numerics::dot(ps[i], ps[i]) < numerics::dot(ps[start], ps[start])) start = i;

    std::vector<std::size_t> support{start};
    Vector weights{1.0};
    Vector x = ps[start];

    const std::size_t max_major = 16 * n + 64;
    double prev_xx = std::numeric_limits<double>::infinity();
    for (std::size_t major = 0; major < max_major; ++major) {
        // Most violating vertex of the optimality condition.
        const double xx = numerics::dot(x, x);
        if (xx >= prev_xx - 1e-17 * scale) break; // stalled => optimal to working precision
        prev_xx = xx;
        std::size_t best = 0;
        double best_dot = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double di = numerics::dot(x, ps[i]);
            if (di < best_dot) {
                best_dot = di;
                best = i;
            }
        }
        if (best_dot >= xx - opt_tol) break; // optimal
        if (std::find(support.begin(), support.end(), best) != support.end())
            break; // numerically stalled; current x is optimal to working precision

        support.push_back(best);
        weights.push_back(0.0);

        // Minor cycles: move to the affine minimizer, dropping vertices
        // whose weights would go negative.
        for (;;) {
            Vector alpha;
            bool solved = true;
            try {
                alpha = detail::affine_min_norm(ps, support);
            } catch (const Error&) {
                solved = false;
            }
            if (!solved) {
                // Affinely dependent corral (duplicate points): drop the
                // highest-index zero-weight entry and retry.
                std::size_t drop = support.size();
                for (std::size_t k = support.size(); k-- > 0;) {
                    if (weights[k] <= drop_tol) {
                        drop = k;
                        break;
                    }
                }
                require(drop < support.size(), Errc::InternalError,
                        "min_norm_point: singular corral without droppable vertex");
                support.erase(support.begin() + static_cast<std::ptrdiff_t>(drop));
                weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(drop));
                continue;
            }

            const double min_alpha = *std::min_element(alpha.begin(), alpha.end());
            if (min_alpha >= -drop_tol) {
                weights = alpha;
                break;
            }
            // Line search from weights toward alpha: largest feasible step.
            double theta = 1.0;
            for (std::size_t k = 0; k < alpha.size(); ++k) {
                if (alpha[k] < drop_tol) {
                    const double denom = weights[k] - alpha[k];
                    if (denom > 0.0) theta = std::min(theta, weights[k] / denom);
                }
            }
            for (std::size_t k = 0; k < alpha.size(); ++k)
                weights[k] = (1.0 - theta) * weights[k] + theta * alpha[k];
            // Remove one vanished vertex (lowest weight, then lowest index).
            std::size_t drop = 0;
            for (std::size_t k = 1; k < weights.size(); ++k)
                if (weights[k] < weights[drop]) drop = k;
            support.erase(support.begin() + static_cast<std::ptrdiff_t>(drop));
            weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(drop));
        }

        // Recompute x from the corral weights.
        x.assign(d, 0.0);
        for (std::size_t k = 0; k < support.size(); ++k)
            for (std::size_t i = 0; i < d; ++i) x[i] += weights[k] * ps[support[k]][i];
    }

    // Normalize the witness: strictly positive weights, ascending support.
    MinNormResult out;
    out.point = x;
    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
    double wsum = 0.0;
    for (std::size_t k : order)
        if (weights[k] > drop_tol) wsum += weights[k];
    for (std::size_t k : order) {
        if (weights[k] > drop_tol) {
            out.witness.support.push_back(support[k]);
            out.witness.weights.push_back(weights[k] / wsum);
        }
    }
    return out;
}

enum class Membership { Inside, Outside, Borderline };

struct MembershipVerdict {
    Membership status = Membership::Borderline;
    std::optional<ConvexCombination> inside;       // set when Inside
    std::optional<SeparatorCertificate> outside;   // set when Outside
    double min_norm_value = 0.0;                   // ||min-norm point||_2
};

namespace detail {

/// Feasibility of { sum l_i v_i = 0, sum l_i = 1, l >= 0 } as an LP.
inline numerics::LpResult membership_lp(const PointSet& ps, double feas_tol)
{
    const std::size_t n = ps.size();
    const std::size_t d = ps.dim;
    numerics::LpProblem p;
    p.objective.assign(n, 0.0);
    p.constraints = Matrix(d + 1, n);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < n; ++j) p.constraints(i, j) = ps[j][i];
    for (std::size_t j = 0; j < n; ++j) p.constraints(d, j) = 1.0;
    p.senses.assign(d + 1, numerics::Sense::Equal);
    p.rhs.assign(d + 1, 0.0);
    p.rhs[d] = 1.0;
    // default bounds: l >= 0
    return numerics::lp_solve(p, feas_tol);
}

} // namespace detail

/// Membership of the origin with a certificate either way. The min-norm
/// route decides; an independent LP feasibility check must agree, otherwise
/// an InternalError is raised.
inline MembershipVerdict contains_origin(const PointSet& ps, const GeometryConfig& cfg = {})
{
    require(ps.size() >= 1, Errc::InvalidInput, "contains_origin: empty point set");
    MinNormResult mnp = min_norm_point(ps, cfg);
    const double mu = numerics::norm2(mnp.point);
    const auto lp = detail::membership_lp(ps, cfg.lp_feas_tol);

    MembershipVerdict verdict;
    verdict.min_norm_value = mu;
    if (mu <= cfg.membership_tol) {
        require(lp.status == numerics::LpStatus::Optimal, Errc::InternalError,
                "contains_origin: min-norm says Inside but membership LP is infeasible");
        require(combination_verifies(ps, mnp.witness, cfg.membership_tol),
                Errc::InternalError, "contains_origin: witness fails recomputation");
        verdict.status = Membership::Inside;
        verdict.inside = mnp.witness;
        return verdict;
    }
    if (mu < 10.0 * cfg.membership_tol) {
        verdict.status = Membership::Borderline;
        return verdict;
    }
    require(lp.status == numerics::LpStatus::Infeasible, Errc::InternalError,
            "contains_origin: min-norm says Outside but membership LP is feasible");
    SeparatorCertificate cert;
    cert.y = mnp.point;
    cert.mode = SepMode::Strict;
    cert.margin = separator_margin(ps, cert.y);
    cert.provenance = Provenance::Direct;
    require(cert.margin > 0.0, Errc::InternalError,
            "contains_origin: min-norm separator has nonpositive margin");
    verdict.status = Membership::Outside;
    verdict.outside = cert;
    return verdict;
}

/// Weak separation oracle: a nonzero y with <v_i, y> >= 0 for all i, or
/// nothing when the origin is interior. Any nonzero separator can be scaled
/// so some coordinate is +-1, so sweeping y_k = +-1 over all k is exhaustive.
inline std::optional<SeparatorCertificate> weak_separator(const PointSet& ps,
                                                          const GeometryConfig& cfg = {})
{
    require(ps.size() >= 1, Errc::InvalidInput, "weak_separator: empty point set");
    const std::size_t n = ps.size();
    const std::size_t d = ps.dim;
    for (std::size_t k = 0; k < d; ++k) {
        for (const double s : {1.0, -1.0}) {
            numerics::LpProblem p;
            p.objective.assign(d, 0.0);
            p.constraints = Matrix(n + 1, d);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) p.constraints(i, j) = ps[i][j];
            p.constraints(n, k) = 1.0;
            p.senses.assign(n, numerics::Sense::GreaterEqual);
            p.senses.push_back(numerics::Sense::Equal);
            p.rhs.assign(n, 0.0);
            p.rhs.push_back(s);
            p.lower.assign(d, -1.0);
            p.upper.assign(d, 1.0);
            const auto res = numerics::lp_solve(p, cfg.lp_feas_tol);
            if (res.status == numerics::LpStatus::Optimal) {
                SeparatorCertificate cert;
                cert.y = res.solution;
                cert.mode = SepMode::Weak;
                cert.margin = separator_margin(ps, cert.y);
                cert.provenance = Provenance::Direct;
                return cert;
            }
        }
    }
    return std::nullopt;
}

enum class Interiority { Interior, NotInterior };

struct InteriorVerdict {
    Interiority status = Interiority::NotInterior;
    std::optional<ConvexCombination> witness;       // set when Interior
    std::optional<SeparatorCertificate> separator;  // set when NotInterior
    double delta_star = 0.0;      // optimum of the interiority LP
    std::size_t affine_rank = 0;  // rank of the centered point matrix
};

/// Interiority of the origin: the LP max delta s.t. sum l_i v_i = 0,
/// sum l_i = 1, l_i >= delta must attain delta* > tol AND the points must
/// affinely span R^d. NotInterior verdicts carry a weak separator witness.
inline InteriorVerdict is_interior(const PointSet& ps, const GeometryConfig& cfg = {})
{
    require(ps.size() >= 1, Errc::InvalidInput, "is_interior: empty point set");
    const std::size_t n = ps.size();
    const std::size_t d = ps.dim;

    // Affine span rank of the centered points.
    Matrix centered(d, n);
    Vector mean(d, 0.0);
    for (const auto& v : ps.points)
        for (std::size_t i = 0; i < d; ++i) mean[i] += v[i] / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < d; ++i) centered(i, j) = ps[j][i] - mean[i];

    const Matrix cct = centered * centered.transposed();
    numerics::SpectralConfig scfg;
    const auto eig = numerics::jacobi_eigensystem(cct, scfg).values;
    double max_val = 0.0;
    for (double v : eig) max_val = std::max(max_val, v);
    const double thresh = cfg.rank_rel_sigma * cfg.rank_rel_sigma * max_val;
    std::size_t rank_lo = 0, rank_hi = 0;
    for (double v : eig) {
        if (v > thresh * 10.0) ++rank_lo;
        if (v > thresh * 0.1) ++rank_hi;
    }
    require(rank_lo == rank_hi || ((rank_lo == d) == (rank_hi == d)), Errc::RankAmbiguous,
            "is_interior: affine rank falls inside the tolerance band");
    const std::size_t rank = rank_lo;

    // Interior-radius LP over the weights.
    numerics::LpProblem p;
    p.objective.assign(n + 1, 0.0);
    p.objective[n] = 1.0; // maximize delta
    p.constraints = Matrix(d + 1 + n, n + 1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < n; ++j) p.constraints(i, j) = ps[j][i];
    for (std::size_t j = 0; j < n; ++j) p.constraints(d, j) = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        p.constraints(d + 1 + i, i) = 1.0;
        p.constraints(d + 1 + i, n) = -1.0;
    }
    p.senses.assign(d + 1, numerics::Sense::Equal);
    for (std::size_t i = 0; i < n; ++i) p.senses.push_back(numerics::Sense::GreaterEqual);
    p.rhs.assign(d + 1 + n, 0.0);
    p.rhs[d] = 1.0;
    p.lower.assign(n + 1, -numerics::kInf);
    p.upper.assign(n + 1, numerics::kInf);
    p.upper[n] = 1.0;
    const auto lp = numerics::lp_solve(p, cfg.lp_feas_tol);

    InteriorVerdict verdict;
    if (lp.status == numerics::LpStatus::Optimal) verdict.delta_star = lp.value;
    verdict.affine_rank = rank;

    const bool interior =
        lp.status == numerics::LpStatus::Optimal && lp.value > cfg.interior_tol && rank == d;
    if (interior) {
        ConvexCombination cc;
        double wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) wsum += lp.solution[i];
        for (std::size_t i = 0; i < n; ++i) {
            cc.support.push_back(i);
            cc.weights.push_back(lp.solution[i] / wsum);
        }
        require(combination_verifies(ps, cc, 10.0 * cfg.lp_feas_tol),
                Errc::InternalError, "is_interior: LP witness fails recomputation");
        verdict.status = Interiority::Interior;
        verdict.witness = std::move(cc);
        return verdict;
    }

    auto sep = weak_separator(ps, cfg);
    require(sep.has_value(), Errc::InternalError,
            "is_interior: NotInterior but no weak separator exists");
    // Recomputed audit, never trusted from the solver.
    require(sep->margin >= -cfg.separation_tol && numerics::norm2(sep->y) > 0.0,
            Errc::InternalError, "is_interior: weak separator fails recomputation");
    verdict.status = Interiority::NotInterior;
    verdict.separator = std::move(*sep);
    return verdict;
}

} // namespace convexcert::geometry
