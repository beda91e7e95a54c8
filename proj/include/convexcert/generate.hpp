#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "convexcert/errors.hpp"
#include "convexcert/geometry.hpp"
#include "convexcert/point_set.hpp"
#include "convexcert/rankin.hpp"
#include "convexcert/rng.hpp"

namespace convexcert::gen {

using numerics::Vector;

enum class InstanceKind {
    OriginInside,
    OriginOutside,
    OriginInterior,
    OriginBoundary,
    RankinObtuse,
    RankinNonAcute,
};

inline const char* to_string(InstanceKind k)
{
    switch (k) {
        case InstanceKind::OriginInside: return "origin-inside";
        case InstanceKind::OriginOutside: return "origin-outside";
        case InstanceKind::OriginInterior: return "origin-interior";
        case InstanceKind::OriginBoundary: return "origin-boundary";
        case InstanceKind::RankinObtuse: return "rankin-obtuse";
        case InstanceKind::RankinNonAcute: return "rankin-nonacute";
    }
    return "unknown";
}

inline InstanceKind kind_from_string(const std::string& s)
{
    if (s == "origin-inside") return InstanceKind::OriginInside;
    if (s == "origin-outside") return InstanceKind::OriginOutside;
    if (s == "origin-interior") return InstanceKind::OriginInterior;
    if (s == "origin-boundary") return InstanceKind::OriginBoundary;
    if (s == "rankin-obtuse") return InstanceKind::RankinObtuse;
    if (s == "rankin-nonacute") return InstanceKind::RankinNonAcute;
    raise(Errc::InvalidInput, "unknown instance kind: " + s);
}

struct InstanceSpec {
    std::size_t dim = 2;
    std::size_t n = 4;
    InstanceKind kind = InstanceKind::OriginInside;
    std::uint64_t seed = 0;
};

namespace detail {

inline Vector random_unit(Xoshiro256& rng, std::size_t d)
{
    Vector u(d);
    double nu = 0.0;
    while (nu < 1e-3) {
        for (auto& c : u) c = rng.uniform(-1, 1);
        nu = numerics::norm2(u);
    }
    for (auto& c : u) c /= nu;
    return u;
}

/// Orthonormal basis whose first vector is u; Gram-Schmidt over the
/// standard basis, skipping near-parallel candidates.
inline std::vector<Vector> basis_from(const Vector& u)
{
    const std::size_t d = u.size();
    std::vector<Vector> basis{u};
    for (std::size_t k = 0; k < d && basis.size() < d; ++k) {
        Vector w(d, 0.0);
        w[k] = 1.0;
        for (const auto& q : basis) {
            const double c = numerics::dot(w, q);
            for (std::size_t i = 0; i < d; ++i) w[i] -= c * q[i];
        }
        const double nw = numerics::norm2(w);
        if (nw < 1e-6) continue;
        for (double& c : w) c /= nw;
        basis.push_back(std::move(w));
    }
    require(basis.size() == d, Errc::InternalError, "basis_from: span defect");
    return basis;
}

inline PointSet draw_inside(Xoshiro256& rng, std::size_t d, std::size_t n)
{
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        Vector p(d);
        for (auto& c : p) c = rng.uniform(-1, 1);
        pts.push_back(p);
    }
    Vector mean(d, 0.0);
    for (const auto& p : pts)
        for (std::size_t k = 0; k < d; ++k) mean[k] += p[k] / static_cast<double>(n);
    for (auto& p : pts)
        for (std::size_t k = 0; k < d; ++k) p[k] -= mean[k];
    return PointSet(d, pts);
}

inline PointSet draw_outside(Xoshiro256& rng, std::size_t d, std::size_t n)
{
    const Vector u = random_unit(rng, d);
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        Vector p(d);
        for (auto& c : p) c = rng.uniform(-1, 1);
        // push the point to height 0.2..1.2 along u
        const double h = 0.2 + rng.uniform(0.0, 1.0) - numerics::dot(u, p);
        for (std::size_t k = 0; k < d; ++k) p[k] += h * u[k];
        pts.push_back(p);
    }
    return PointSet(d, pts);
}

inline PointSet draw_interior(Xoshiro256& rng, std::size_t d, std::size_t n)
{
    // randomly scaled regular simplex directions enclose the origin
    const PointSet simplex = rankin::extremal_config(d, rankin::RankinMode::Obtuse);
    std::vector<Vector> pts;
    for (const auto& s : simplex.points) pts.push_back(numerics::scaled(s, rng.uniform(0.6, 1.6)));
    while (pts.size() < n) {
        Vector p(d);
        for (auto& c : p) c = rng.uniform(-1, 1);
        pts.push_back(p);
    }
    return PointSet(d, pts);
}

inline PointSet draw_boundary(Xoshiro256& rng, std::size_t d, std::size_t n)
{
    if (d == 1) {
        // the origin itself plus positive points
        std::vector<Vector> pts{Vector{0.0}};
        while (pts.size() < n) pts.push_back(Vector{rng.uniform(0.2, 1.5)});
        return PointSet(1, pts);
    }
    // A (d-1)-dimensional simplex fan inside the hyperplane orthogonal to a
    // random u carries the origin; every other point sits strictly above.
    const Vector u = random_unit(rng, d);
    const auto basis = basis_from(u); // basis[0] = u
    const PointSet face = rankin::extremal_config(d - 1, rankin::RankinMode::Obtuse);
    std::vector<Vector> pts;
    for (const auto& f : face.points) {
        const double scale = rng.uniform(0.6, 1.6);
        Vector p(d, 0.0);
        for (std::size_t k = 0; k + 1 < d; ++k)
            for (std::size_t i = 0; i < d; ++i) p[i] += scale * f[k] * basis[k + 1][i];
        pts.push_back(p);
    }
    while (pts.size() < n) {
        Vector p(d, 0.0);
        const double h = rng.uniform(0.3, 1.2);
        for (std::size_t i = 0; i < d; ++i) p[i] += h * u[i];
        for (std::size_t k = 1; k < d; ++k) {
            const double c = rng.uniform(-1, 1);
            for (std::size_t i = 0; i < d; ++i) p[i] += c * basis[k][i];
        }
        pts.push_back(p);
    }
    return PointSet(d, pts);
}

inline PointSet draw_rankin(Xoshiro256& rng, std::size_t d, std::size_t n,
                            rankin::RankinMode mode)
{
    // random rotation of a subset of the extremal configuration, with
    // per-vector positive scales (the predicates are scale invariant)
    const PointSet extremal = rankin::extremal_config(d, mode);
    std::vector<Vector> cols;
    for (std::size_t k = 0; k < d; ++k) cols.push_back(random_unit(rng, d));
    // Gram-Schmidt into a rotation
    std::vector<Vector> q;
    for (auto& w : cols) {
        for (const auto& prev : q) {
            const double c = numerics::dot(w, prev);
            for (std::size_t i = 0; i < d; ++i) w[i] -= c * prev[i];
        }
        const double nw = numerics::norm2(w);
        if (nw < 1e-6) return PointSet(d, {}); // retry upstream
        for (double& c : w) c /= nw;
        q.push_back(w);
    }
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        Vector p(d, 0.0);
        const double scale = rng.uniform(0.5, 2.0);
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t r = 0; r < d; ++r) p[r] += scale * extremal[i][k] * q[k][r];
        pts.push_back(p);
    }
    return PointSet(d, pts);
}

} // namespace detail

/// Deterministic instance generation: all randomness flows from the seed
/// through xoshiro256**, the construction is verified against the geometry
/// oracles before emission, and a bounded retry budget guards against
/// rejection-sampling stalls.
inline PointSet generate(const InstanceSpec& spec, const geometry::GeometryConfig& cfg = {})
{
    const std::size_t d = spec.dim;
    const std::size_t n = spec.n;
    require(d >= 1 && n >= 1, Errc::InvalidInput, "generate: dim and n must be positive");

    auto fail = [&](const std::string& why) -> PointSet {
        raise(Errc::GenerationFailed,
              "generate(kind=" + std::string(to_string(spec.kind)) +
                  ", dim=" + std::to_string(d) + ", n=" + std::to_string(n) +
                  ", seed=" + std::to_string(spec.seed) + "): " + why);
    };

    switch (spec.kind) {
        case InstanceKind::OriginInside:
            if (n < 2) return fail("needs n >= 2");
            break;
        case InstanceKind::OriginInterior:
            if (n < d + 1) return fail("needs n >= d+1");
            break;
        case InstanceKind::OriginBoundary:
            if (n < std::max<std::size_t>(d, 1)) return fail("needs n >= d");
            break;
        case InstanceKind::RankinObtuse:
            if (n > d + 1) return fail("impossible: more than d+1 pairwise-obtuse vectors");
            break;
        case InstanceKind::RankinNonAcute:
            if (n > 2 * d) return fail("impossible: more than 2d pairwise-non-acute vectors");
            break;
        default: break;
    }

    Xoshiro256 rng(spec.seed);
    const int budget = 64;
    for (int attempt = 0; attempt < budget; ++attempt) {
        PointSet ps;
        try {
            switch (spec.kind) {
                case InstanceKind::OriginInside: ps = detail::draw_inside(rng, d, n); break;
                case InstanceKind::OriginOutside: ps = detail::draw_outside(rng, d, n); break;
                case InstanceKind::OriginInterior: ps = detail::draw_interior(rng, d, n); break;
                case InstanceKind::OriginBoundary: ps = detail::draw_boundary(rng, d, n); break;
                case InstanceKind::RankinObtuse:
                    ps = detail::draw_rankin(rng, d, n, rankin::RankinMode::Obtuse);
                    break;
                case InstanceKind::RankinNonAcute:
                    ps = detail::draw_rankin(rng, d, n, rankin::RankinMode::NonAcute);
                    break;
            }
            if (ps.size() != n) continue;

            // verify the kind before emission
            switch (spec.kind) {
                case InstanceKind::OriginInside:
                    if (geometry::contains_origin(ps, cfg).status !=
                        geometry::Membership::Inside)
                        continue;
                    break;
                case InstanceKind::OriginOutside:
                    if (geometry::contains_origin(ps, cfg).status !=
                        geometry::Membership::Outside)
                        continue;
                    break;
                case InstanceKind::OriginInterior:
                    if (geometry::is_interior(ps, cfg).status !=
                        geometry::Interiority::Interior)
                        continue;
                    break;
                case InstanceKind::OriginBoundary: {
                    if (geometry::is_interior(ps, cfg).status !=
                        geometry::Interiority::NotInterior)
                        continue;
                    if (geometry::contains_origin(ps, cfg).status !=
                        geometry::Membership::Inside)
                        continue;
                    break;
                }
                case InstanceKind::RankinObtuse:
                    if (!rankin::check_angles(ps, rankin::RankinMode::Obtuse).predicate_holds)
                        continue;
                    break;
                case InstanceKind::RankinNonAcute:
                    if (!rankin::check_angles(ps, rankin::RankinMode::NonAcute)
                             .predicate_holds)
                        continue;
                    break;
            }
            return ps;
        } catch (const Error&) {
            continue; // borderline or ambiguous draw: try again
        }
    }
    return fail("retry budget exhausted");
}

} // namespace convexcert::gen
