#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "convexcert/eigen.hpp"
#include "convexcert/errors.hpp"
#include "convexcert/matrix.hpp"
#include "convexcert/point_set.hpp"

namespace convexcert::rankin {

using numerics::Matrix;
using numerics::SpectralReport;
using numerics::Vector;

enum class RankinMode { Obtuse, NonAcute };

struct RankinConfig {
    double angle_tol = 1e-10; // "larger than pi/2" is dot < -tol, "at least" is dot <= tol
    double zero_tol = 1e-10;  // vectors with norm <= zero_tol are rejected
    numerics::SpectralConfig spectral;
};

/// Pairwise-angle check against the bound n <= d+1 (Obtuse) or n <= 2d
/// (NonAcute). Angles are never computed: the predicates act on dot products
/// directly, which avoids precision loss near pi/2.
struct AngleCheckReport {
    RankinMode mode = RankinMode::Obtuse;
    std::size_t n = 0;
    std::size_t dim = 0;
    bool predicate_holds = false;
    double max_pair_dot = 0.0; // over the vectors the predicate acted on
    std::size_t bound = 0;     // d+1 or 2d
    bool within_bound = false;
    bool normalized = false;   // NonAcute scales inputs to unit length first
    std::optional<SpectralReport> spectral_witness; // spectrum of the used Gram
};

inline AngleCheckReport check_angles(const PointSet& ps, RankinMode mode,
                                     const RankinConfig& cfg = {})
{
    require(ps.size() >= 1, Errc::InvalidInput, "check_angles: empty point set");
    for (const auto& v : ps.points)
        require(numerics::norm2(v) > cfg.zero_tol, Errc::ZeroVector,
                "check_angles: zero vector in input");

    AngleCheckReport rep;
    rep.mode = mode;
    rep.n = ps.size();
    rep.dim = ps.dim;
    rep.bound = mode == RankinMode::Obtuse ? ps.dim + 1 : 2 * ps.dim;
    rep.within_bound = rep.n <= rep.bound;

    // NonAcute normalizes to unit length; the predicate is scale invariant
    // per vector, so this only conditions the spectra.
    PointSet used = ps;
    if (mode == RankinMode::NonAcute) {
        for (auto& v : used.points) {
            const double nv = numerics::norm2(v);
            if (std::abs(nv - 1.0) > 1e-12) rep.normalized = true;
            for (double& c : v) c /= nv;
        }
    }

    double max_dot = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < used.size(); ++i)
        for (std::size_t j = i + 1; j < used.size(); ++j)
            max_dot = std::max(max_dot, numerics::dot(used[i], used[j]));
    rep.max_pair_dot = used.size() > 1 ? max_dot : 0.0;

    rep.predicate_holds = used.size() <= 1 ||
                          (mode == RankinMode::Obtuse ? max_dot < -cfg.angle_tol
                                                      : max_dot <= cfg.angle_tol);
    rep.spectral_witness = numerics::symmetric_eig(numerics::gram(used), cfg.spectral);
    return rep;
}

namespace detail {

/// Orthonormal basis of the sum-zero subspace of R^(d+1), built by
/// Gram-Schmidt over the fixed difference vectors e_k - e_(k+1).
inline std::vector<Vector> sum_zero_basis(std::size_t d)
{
    std::vector<Vector> basis;
    for (std::size_t k = 0; k < d; ++k) {
        Vector w(d + 1, 0.0);
        w[k] = 1.0;
        w[k + 1] = -1.0;
        for (const auto& q : basis) {
            const double c = numerics::dot(w, q);
            for (std::size_t i = 0; i < d + 1; ++i) w[i] -= c * q[i];
        }
        const double nw = numerics::norm2(w);
        for (double& c : w) c /= nw;
        basis.push_back(std::move(w));
    }
    return basis;
}

} // namespace detail

/// Extremal construction meeting the bound exactly: d+1 regular simplex
/// directions with pairwise dot -1/d (Obtuse), or the 2d signed basis
/// vectors (NonAcute).
inline PointSet extremal_config(std::size_t d, RankinMode mode)
{
    require(d >= 1, Errc::InvalidInput, "extremal_config: d must be >= 1");
    std::vector<Vector> pts;
    if (mode == RankinMode::NonAcute) {
        for (std::size_t k = 0; k < d; ++k) {
            Vector plus(d, 0.0), minus(d, 0.0);
            plus[k] = 1.0;
            minus[k] = -1.0;
            pts.push_back(plus);
            pts.push_back(minus);
        }
        return PointSet(d, pts);
    }
    // Regular simplex directions: center the d+1 standard basis vectors of
    // R^(d+1), express them in a basis of the sum-zero subspace, normalize.
    const auto basis = detail::sum_zero_basis(d);
    const double shift = 1.0 / static_cast<double>(d + 1);
    for (std::size_t i = 0; i < d + 1; ++i) {
        Vector centered(d + 1, -shift);
        centered[i] += 1.0;
        Vector coords(d, 0.0);
        for (std::size_t k = 0; k < d; ++k) coords[k] = numerics::dot(centered, basis[k]);
        const double nc = numerics::norm2(coords);
        for (double& c : coords) c /= nc;
        pts.push_back(std::move(coords));
    }
    return PointSet(d, pts);
}

enum class Realizability { Realizable, Unrealizable, Indeterminate };

/// Whether a claimed Gram matrix can come from n vectors of R^d under the
/// mode predicate, decided spectrally:
/// PSD plus numerical rank at most d. The report carries the obstruction
/// data: the top-eigenvalue multiplicity of H = lambda I - G (Obtuse, where
/// multiplicity >= 2 at the top would contradict Perron simplicity for the
/// entrywise-positive H) and the trace of H = I - G (NonAcute, where
/// tr H = 0 with |eig| <= rho forces n <= 2d).
struct WitnessReport {
    Realizability verdict = Realizability::Indeterminate;
    SpectralReport spectrum; // of g
    std::size_t n = 0;
    std::size_t dim = 0;
    RankinMode mode = RankinMode::Obtuse;
    double lambda_shift = 0.0;      // Obtuse: lambda > max diagonal used for H
    std::size_t top_multiplicity = 0; // top eigenvalue cluster size of H
    double trace_h = 0.0;           // tr(lambda I - G) or tr(I - G)
    std::size_t bound = 0;
    bool within_bound = false;
};

inline WitnessReport spectral_witness(const Matrix& g, std::size_t d, RankinMode mode,
                                      const RankinConfig& cfg = {})
{
    require(g.square() && g.rows() >= 1, Errc::InvalidInput,
            "spectral_witness: g must be square and nonempty");
    require(g.asymmetry() <= cfg.spectral.tol, Errc::NotSymmetric,
            "spectral_witness: g is not symmetric");
    const std::size_t n = g.rows();

    for (std::size_t i = 0; i < n; ++i) {
        if (mode == RankinMode::Obtuse) {
            require(g(i, i) > cfg.angle_tol, Errc::ModeViolated,
                    "spectral_witness: obtuse mode needs positive diagonal");
        } else {
            require(std::abs(g(i, i) - 1.0) <= 1e-9, Errc::ModeViolated,
                    "spectral_witness: non-acute mode needs unit diagonal");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (mode == RankinMode::Obtuse)
                require(g(i, j) < -cfg.angle_tol, Errc::ModeViolated,
                        "spectral_witness: off-diagonal not obtuse");
            else
                require(g(i, j) <= cfg.angle_tol, Errc::ModeViolated,
                        "spectral_witness: off-diagonal not non-acute");
        }
    }

    WitnessReport rep;
    rep.n = n;
    rep.dim = d;
    rep.mode = mode;
    rep.bound = mode == RankinMode::Obtuse ? d + 1 : 2 * d;
    rep.within_bound = n <= rep.bound;
    rep.spectrum = numerics::symmetric_eig(g, cfg.spectral);

    // Rank decision with an explicit ambiguity band.
    const double thresh = rep.spectrum.rank_threshold;
    std::size_t rank_lo = 0, rank_hi = 0;
    for (double v : rep.spectrum.eigenvalues) {
        if (std::abs(v) > thresh * 10.0) ++rank_lo;
        if (std::abs(v) > thresh * 0.1) ++rank_hi;
    }
    const bool rank_decided = (rank_lo <= d) == (rank_hi <= d);

    // Obstruction data behind the verdict.
    double diag_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag_max = std::max(diag_max, g(i, i));
    rep.lambda_shift = mode == RankinMode::Obtuse ? diag_max + 1.0 : 1.0;
    rep.trace_h = rep.lambda_shift * static_cast<double>(n) - g.trace();
    // Top eigenvalue of H corresponds to the bottom cluster of g.
    rep.top_multiplicity = rep.spectrum.clusters.empty()
                               ? 0
                               : rep.spectrum.clusters.front().size();

    if (!rank_decided) {
        rep.verdict = Realizability::Indeterminate;
    } else if (rep.spectrum.psd && rep.spectrum.numerical_rank <= d) {
        rep.verdict = Realizability::Realizable;
    } else {
        rep.verdict = Realizability::Unrealizable;
    }
    return rep;
}

} // namespace convexcert::rankin
