#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <variant>
#include <vector>

#include "convexcert/errors.hpp"
#include "convexcert/geometry.hpp"
#include "convexcert/matrix.hpp"
#include "convexcert/perron.hpp"
#include "convexcert/point_set.hpp"

namespace convexcert::certificates {

using geometry::Provenance;
using geometry::SeparatorCertificate;
using geometry::SepMode;
using numerics::Matrix;
using numerics::PerronPair;
using numerics::Vector;

/// One separating direction per point: y_j separates the origin from every
/// point except possibly v_j itself.
struct LeaveOneOutSeparators {
    std::vector<Vector> y;
    SepMode mode = SepMode::Strict;
};

struct CertificateConfig {
    double strict_tol = 0.0;       // <v_i, y_j> must exceed this for i != j (strict mode)
    double weak_tol = 1e-9;        // <v_i, y_j> >= -weak_tol (weak mode)
    double rescale_floor = 1e-12;  // |<v_i, y_i>| below this cannot be rescaled to -1
    double zero_tol = 1e-9;        // ||y*|| <= zero_tol is a zero separator
    numerics::PerronConfig perron;
};

/// A global separator assembled from leave-one-out separators through the
/// Perron eigenvector of H = lambda I + V^T Y.
struct PerronCertificate {
    Matrix h;
    double lambda = 0.0;
    PerronPair perron;
    SeparatorCertificate separator; // provenance PerronBuilt
};

/// The short-circuit branch of the non-interiority argument: some y_i already
/// separates the whole set weakly.
struct DirectCertificate {
    std::size_t index = 0;
    SeparatorCertificate separator; // provenance Direct
};

using NoninteriorCertificate = std::variant<PerronCertificate, DirectCertificate>;

namespace detail {

inline void audit_shape(const PointSet& ps, const LeaveOneOutSeparators& seps)
{
    require(seps.y.size() == ps.size(), Errc::SeparatorInvalid,
            "leave-one-out separators: need exactly one direction per point");
    for (const auto& y : seps.y)
        require(y.size() == ps.dim, Errc::SeparatorInvalid,
                "leave-one-out separators: dimension mismatch");
}

inline Vector assemble(const std::vector<Vector>& ys, const Vector& x, std::size_t dim)
{
    Vector out(dim, 0.0);
    for (std::size_t j = 0; j < ys.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i) out[i] += x[j] * ys[j][i];
    return out;
}

} // namespace detail

/// Certify that the origin lies outside conv(ps) with a single hyperplane,
/// assembled from strict leave-one-out separators: form
/// H = lambda I + V^T Y with lambda = max(0, max_i -<v_i, y_i>) + 1, take the
/// Perron pair (rho, x) of the entrywise-positive H and return y* = Y x,
/// which must satisfy <v_i, y*> > 0 for every i.
inline PerronCertificate certify_nonmembership(const PointSet& ps,
                                               const LeaveOneOutSeparators& seps,
                                               const CertificateConfig& cfg = {})
{
    const std::size_t n = ps.size();
    require(n >= 2, Errc::InvalidInput, "certify_nonmembership: need n >= 2");
    require(seps.mode == SepMode::Strict, Errc::SeparatorInvalid,
            "certify_nonmembership: separators must be strict");
    detail::audit_shape(ps, seps);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (i != j)
                require(numerics::dot(ps[i], seps.y[j]) > cfg.strict_tol,
                        Errc::SeparatorInvalid,
                        "certify_nonmembership: leave-one-out strictness fails");

    double lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        lambda = std::max(lambda, -numerics::dot(ps[i], seps.y[i]));
    lambda += 1.0;

    Matrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) = (i == j ? lambda : 0.0) + numerics::dot(ps[i], seps.y[j]);
    for (double v : h.data())
        require(v > 0.0, Errc::NonPositiveH,
                "certify_nonmembership: H has a nonpositive entry");

    const PerronPair pp = numerics::perron(h, cfg.perron);
    const Vector y_star = detail::assemble(seps.y, pp.x, ps.dim);

    double min_dot = std::numeric_limits<double>::infinity();
    for (const auto& v : ps.points)
        min_dot = std::min(min_dot, numerics::dot(v, y_star));
    require(min_dot > 0.0, Errc::CertificateFailed,
            "certify_nonmembership: assembled separator is not strict");

    PerronCertificate cert;
    cert.h = std::move(h);
    cert.lambda = lambda;
    cert.perron = pp;
    cert.separator.y = y_star;
    cert.separator.mode = SepMode::Strict;
    cert.separator.margin = geometry::separator_margin(ps, y_star);
    cert.separator.provenance = Provenance::PerronBuilt;
    return cert;
}

/// Certify that the origin is not interior to conv(ps). If some
/// <v_i, y_i> >= 0 that direction already separates everything and is the
/// certificate. Otherwise each y_i is rescaled to <v_i, y_i> = -1,
/// H = I + V^T Y is entrywise nonnegative, its Perron root must exceed 1,
/// and y* = Y x is a nonzero weak separator.
inline NoninteriorCertificate certify_noninterior(const PointSet& ps,
                                                  const LeaveOneOutSeparators& seps,
                                                  const CertificateConfig& cfg = {})
{
    const std::size_t n = ps.size();
    require(n >= 1, Errc::InvalidInput, "certify_noninterior: empty point set");
    require(seps.mode == SepMode::Weak, Errc::SeparatorInvalid,
            "certify_noninterior: separators must be weak");
    detail::audit_shape(ps, seps);
    for (std::size_t j = 0; j < n; ++j) {
        require(numerics::norm2(seps.y[j]) > cfg.zero_tol, Errc::SeparatorInvalid,
                "certify_noninterior: zero leave-one-out separator");
        for (std::size_t i = 0; i < n; ++i)
            if (i != j)
                require(numerics::dot(ps[i], seps.y[j]) >= -cfg.weak_tol,
                        Errc::SeparatorInvalid,
                        "certify_noninterior: leave-one-out weakness fails");
    }

    // Short-circuit: some y_i weakly separates its own point too.
    for (std::size_t i = 0; i < n; ++i) {
        if (numerics::dot(ps[i], seps.y[i]) >= 0.0) {
            DirectCertificate cert;
            cert.index = i;
            cert.separator.y = seps.y[i];
            cert.separator.mode = SepMode::Weak;
            cert.separator.margin = geometry::separator_margin(ps, seps.y[i]);
            cert.separator.provenance = Provenance::Direct;
            require(cert.separator.margin >= -cfg.weak_tol, Errc::CertificateFailed,
                    "certify_noninterior: short-circuit separator fails recheck");
            return cert;
        }
    }

    // Rescale to <v_i, y_i> = -1. Values too close to zero would amplify
    // noise instead of normalizing, so they are rejected.
    std::vector<Vector> ys = seps.y;
    for (std::size_t i = 0; i < n; ++i) {
        const double own = numerics::dot(ps[i], ys[i]);
        require(own <= -cfg.rescale_floor, Errc::SeparatorInvalid,
                "certify_noninterior: |<v_i,y_i>| too small to rescale");
        const double inv = -1.0 / own;
        for (double& c : ys[i]) c *= inv;
    }

    Matrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = (i == j ? 1.0 : 0.0) + numerics::dot(ps[i], ys[j]);
            if (i == j) v = 0.0; // exactly 1 + (-1) after rescaling
            require(v >= -1e-7, Errc::SeparatorInvalid,
                    "certify_noninterior: H entry negative beyond tolerance");
            h(i, j) = std::max(v, 0.0);
        }
    }

    const PerronPair pp = numerics::perron(h, cfg.perron);
    require(pp.rho > 1.0 + 1e-9, Errc::RhoNotAboveOne,
            "certify_noninterior: spectral radius not above 1 (n <= 2d misuse or "
            "numerical failure)");

    const Vector y_star = detail::assemble(ys, pp.x, ps.dim);
    require(numerics::norm2(y_star) > cfg.zero_tol, Errc::ZeroSeparator,
            "certify_noninterior: assembled separator is numerically zero");
    for (const auto& v : ps.points)
        require(numerics::dot(v, y_star) >= -cfg.weak_tol, Errc::CertificateFailed,
                "certify_noninterior: assembled separator is not weak");

    PerronCertificate cert;
    cert.h = std::move(h);
    cert.lambda = 1.0;
    cert.perron = pp;
    cert.separator.y = y_star;
    cert.separator.mode = SepMode::Weak;
    cert.separator.margin = geometry::separator_margin(ps, y_star);
    cert.separator.provenance = Provenance::PerronBuilt;
    return cert;
}

/// Strict leave-one-out separators from the min-norm-point oracle: y_j is
/// the minimum-norm point of conv(ps minus v_j), which exists as a strict
/// separator precisely because the origin misses every leave-one-out hull.
inline LeaveOneOutSeparators leave_one_out_strict(const PointSet& ps,
                                                  const geometry::GeometryConfig& cfg = {})
{
    require(ps.size() >= 2, Errc::InvalidInput, "leave_one_out_strict: need n >= 2");
    LeaveOneOutSeparators seps;
    seps.mode = SepMode::Strict;
    for (std::size_t j = 0; j < ps.size(); ++j) {
        const auto mnp = geometry::min_norm_point(ps.without(j), cfg);
        require(numerics::norm2(mnp.point) > 10.0 * cfg.membership_tol,
                Errc::SeparatorInvalid,
                "leave_one_out_strict: origin lies in a leave-one-out hull");
        seps.y.push_back(mnp.point);
    }
    return seps;
}

/// Weak leave-one-out separators. With prefer_cutting set, each y_j is chosen
/// by an LP that minimizes <v_j, y> over the weak-separation cone of the
/// other points, which drives the construction into the eigenvector branch
/// whenever the left-out point can be cut at all; otherwise the first
/// feasible separator of the sweep is used.
inline LeaveOneOutSeparators leave_one_out_weak(const PointSet& ps, bool prefer_cutting,
                                                const geometry::GeometryConfig& cfg = {})
{
    require(ps.size() >= 2, Errc::InvalidInput, "leave_one_out_weak: need n >= 2");
    const std::size_t n = ps.size();
    const std::size_t d = ps.dim;
    LeaveOneOutSeparators seps;
    seps.mode = SepMode::Weak;
    for (std::size_t j = 0; j < n; ++j) {
        std::optional<Vector> chosen;
        if (prefer_cutting) {
            numerics::LpProblem p;
            p.objective.assign(d, 0.0);
            for (std::size_t k = 0; k < d; ++k) p.objective[k] = -ps[j][k]; // max -<v_j, y>
            p.constraints = Matrix(n - 1, d);
            std::size_t row = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == j) continue;
                for (std::size_t k = 0; k < d; ++k) p.constraints(row, k) = ps[i][k];
                ++row;
            }
            p.senses.assign(n - 1, numerics::Sense::GreaterEqual);
            p.rhs.assign(n - 1, 0.0);
            p.lower.assign(d, -1.0);
            p.upper.assign(d, 1.0);
            const auto res = numerics::lp_solve(p, cfg.lp_feas_tol);
            if (res.status == numerics::LpStatus::Optimal && res.value > cfg.separation_tol)
                chosen = res.solution;
        }
        if (!chosen) {
            auto sep = geometry::weak_separator(ps.without(j), cfg);
            require(sep.has_value(), Errc::SeparatorInvalid,
                    "leave_one_out_weak: origin interior to a leave-one-out hull");
            chosen = sep->y;
        }
        seps.y.push_back(std::move(*chosen));
    }
    return seps;
}

/// Re-verification from scratch: recomputes every dot product and never
/// trusts the stored margin. Failure is an outcome, not an exception.
struct VerificationReport {
    bool pass = false;
    double margin = 0.0; // min_i <v_i, y> / ||y||
    double norm_y = 0.0;
    SepMode mode = SepMode::Strict;
};

inline VerificationReport verify_certificate(const PointSet& ps,
                                             const SeparatorCertificate& cert,
                                             double weak_tol = 1e-9)
{
    VerificationReport rep;
    rep.mode = cert.mode;
    rep.norm_y = numerics::norm2(cert.y);
    if (cert.y.size() != ps.dim || rep.norm_y == 0.0) {
        rep.pass = false;
        return rep;
    }
    double min_dot = std::numeric_limits<double>::infinity();
    for (const auto& v : ps.points)
        min_dot = std::min(min_dot, numerics::dot(v, cert.y));
    rep.margin = min_dot / rep.norm_y;
    rep.pass = cert.mode == SepMode::Strict ? min_dot > 0.0
                                            : rep.margin >= -weak_tol;
    return rep;
}

} // namespace convexcert::certificates
