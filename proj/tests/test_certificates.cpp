#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "convexcert/certificates.hpp"
#include "convexcert/eigen.hpp"
#include "convexcert/rng.hpp"

#include "oracles.hpp"

using namespace convexcert;
using namespace convexcert::certificates;
using numerics::Matrix;
using numerics::Vector;
using numerics::dot;
using numerics::norm2;

namespace {

PointSet outside_instance(Xoshiro256& rng, std::size_t d, std::size_t n)
{
    // all points on the positive side of a random unit direction
    Vector u(d);
    double nu = 0.0;
    while (nu < 1e-6) {
        for (auto& c : u) c = rng.uniform(-1, 1);
        nu = norm2(u);
    }
    for (auto& c : u) c /= nu;
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        Vector p(d);
        for (auto& c : p) c = rng.uniform(-1, 1);
        const double h = 0.2 + rng.uniform(0.0, 1.0) - dot(u, p);
        for (std::size_t k = 0; k < d; ++k) p[k] += h * u[k];
        pts.push_back(p);
    }
    return PointSet(d, pts);
}

/// n = 2d+1 vectors, each an extreme ray of their conic hull: circle
/// positions lifted into the last coordinate sit in convex position, so
/// every point can be strictly cut from the others. Needs d >= 3, since the
/// lifted polytope lives in R^(d-1) and must carry 2d+1 vertices.
PointSet every_point_extreme_instance(Xoshiro256& rng, std::size_t d)
{
    const std::size_t n = 2 * d + 1;
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        Vector p(d, 0.0);
        const double angle = (2.0 * 3.14159265358979323846 *
                              (static_cast<double>(i) + rng.uniform(0.05, 0.45))) /
                             static_cast<double>(n);
        p[0] = std::cos(angle);
        p[1] = std::sin(angle);
        for (std::size_t k = 2; k + 1 < d; ++k) p[k] = 0.1 * rng.uniform(-1, 1);
        p[d - 1] = 1.0;
        pts.push_back(p);
    }
    return PointSet(d, pts);
}

} // namespace

TEST_CASE("certify_nonmembership on the hand-solved 1-d instance")
{
    // v = (1), (2) with y_1 = y_2 = 1: lambda = 1, H = [[2,1],[2,3]],
    // rho = 4 (char poly t^2 - 5t + 4), x = (1,2)/sqrt(5), y* = 3/sqrt(5)
    PointSet ps(1, {{1.0}, {2.0}});
    LeaveOneOutSeparators seps;
    seps.mode = geometry::SepMode::Strict;
    seps.y = {{1.0}, {1.0}};
    const auto cert = certify_nonmembership(ps, seps);

    CHECK(cert.lambda == Catch::Approx(1.0));
    CHECK(cert.h(0, 0) == Catch::Approx(2.0));
    CHECK(cert.h(0, 1) == Catch::Approx(1.0));
    CHECK(cert.h(1, 0) == Catch::Approx(2.0));
    CHECK(cert.h(1, 1) == Catch::Approx(3.0));
    CHECK(cert.perron.rho == Catch::Approx(4.0).margin(1e-9));
    CHECK(cert.perron.x[0] == Catch::Approx(1.0 / std::sqrt(5.0)).margin(1e-8));
    CHECK(cert.perron.x[1] == Catch::Approx(2.0 / std::sqrt(5.0)).margin(1e-8));
    CHECK(cert.separator.y[0] == Catch::Approx(3.0 / std::sqrt(5.0)).margin(1e-8));
    CHECK(dot(ps[0], cert.separator.y) > 0.0);
    CHECK(dot(ps[1], cert.separator.y) > 0.0);
    CHECK(cert.separator.provenance == geometry::Provenance::PerronBuilt);
}

TEST_CASE("certify_nonmembership on the symmetric planar pair")
{
    PointSet ps(2, {{1, 0}, {0, 1}});
    LeaveOneOutSeparators seps;
    seps.mode = geometry::SepMode::Strict;
    seps.y = {{1, 1}, {1, 1}};
    const auto cert = certify_nonmembership(ps, seps);
    // y* is a positive multiple of (1,1)
    CHECK(cert.separator.y[0] == Catch::Approx(cert.separator.y[1]).margin(1e-10));
    CHECK(cert.separator.y[0] > 0.0);
    CHECK(verify_certificate(ps, cert.separator).pass);
}

TEST_CASE("certify_nonmembership audits the separators")
{
    PointSet ps(2, {{1, 0}, {-1, 0}});
    LeaveOneOutSeparators seps;
    seps.mode = geometry::SepMode::Strict;
    seps.y = {{1, 0}, {1, 0}}; // <v_2, y_1> = -1 < 0: not a leave-one-out separator
    CHECK_THROWS_AS(certify_nonmembership(ps, seps), Error);
}

TEST_CASE("certify_nonmembership pipeline on seeded outside instances")
{
    Xoshiro256 rng(301);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t d = 1 + rng.below(4);
        const std::size_t n = 2 + rng.below(11);
        const PointSet ps = outside_instance(rng, d, n);
        REQUIRE(geometry::contains_origin(ps).status == geometry::Membership::Outside);

        const auto seps = leave_one_out_strict(ps);
        const auto cert = certify_nonmembership(ps, seps);

        // strict pipeline: normalized margin strictly positive
        CHECK(cert.separator.margin > 1e-9);
        for (const auto& v : ps.points) CHECK(dot(v, cert.separator.y) > 0.0);

        // eigen-identity (V^T Y) x = (rho - lambda) x recomputed from scratch
        const std::size_t nn = ps.size();
        Matrix vty(nn, nn);
        for (std::size_t i = 0; i < nn; ++i)
            for (std::size_t j = 0; j < nn; ++j) vty(i, j) = dot(ps[i], seps.y[j]);
        const Vector lhs = vty * cert.perron.x;
        double resid = 0.0;
        for (std::size_t i = 0; i < nn; ++i)
            resid = std::max(resid,
                             std::abs(lhs[i] - (cert.perron.rho - cert.lambda) *
                                                   cert.perron.x[i]));
        CHECK(resid <= 1e-8);

        // rho exceeds lambda and x is entrywise positive
        CHECK(cert.perron.rho > cert.lambda);
        for (double c : cert.perron.x) CHECK(c > 0.0);

        // rank bound: V^T Y has numerical rank at most d
        CHECK(numerics::numerical_rank(vty) <= d);

        // lambda eigenvalue multiplicity >= 2 whenever n >= d+2, seen as the
        // spectrum of V^T Y clustering at zero with multiplicity >= n-d
        if (nn >= d + 2) CHECK(numerics::numerical_rank(vty) <= nn - 2);

        CHECK(verify_certificate(ps, cert.separator).pass);
    }
}

TEST_CASE("certify_noninterior takes the short-circuit branch when possible")
{
    // origin sits on the boundary; the zero point forces <v_1, y_1> = 0
    PointSet ps(2, {{0, 0}, {1, 0}, {0, 1}});
    const auto seps = leave_one_out_weak(ps, false);
    const auto cert = certify_noninterior(ps, seps);
    REQUIRE(std::holds_alternative<DirectCertificate>(cert));
    const auto& direct = std::get<DirectCertificate>(cert);
    CHECK(verify_certificate(ps, direct.separator).pass);
    CHECK(direct.separator.provenance == geometry::Provenance::Direct);
}

TEST_CASE("certify_noninterior reports SeparatorInvalid on interior input")
{
    // o interior: no weak leave-one-out separator exists for the full set
    PointSet ps(1, {{-1.0}, {1.0}, {2.0}});
    CHECK_THROWS_AS(leave_one_out_weak(ps, false), Error);
    // hand-built directions cannot satisfy the audit either
    LeaveOneOutSeparators seps;
    seps.mode = geometry::SepMode::Weak;
    seps.y = {{1.0}, {1.0}, {1.0}}; // <v_1, y_2> = -1: audit must fail
    CHECK_THROWS_AS(certify_noninterior(ps, seps), Error);
}

TEST_CASE("certify_noninterior eigenvector branch on extreme-ray instances")
{
    Xoshiro256 rng(307);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t d = 3 + rng.below(2); // d in {3,4}
        const PointSet ps = every_point_extreme_instance(rng, d);
        REQUIRE(ps.size() == 2 * d + 1);

        const auto seps = leave_one_out_weak(ps, true);
        // every own-point product is strictly negative: Perron branch
        for (std::size_t i = 0; i < ps.size(); ++i)
            REQUIRE(dot(ps[i], seps.y[i]) < 0.0);

        const auto cert_var = certify_noninterior(ps, seps);
        REQUIRE(std::holds_alternative<PerronCertificate>(cert_var));
        const auto& cert = std::get<PerronCertificate>(cert_var);

        CHECK(cert.perron.rho > 1.0 + 1e-9);
        CHECK(norm2(cert.separator.y) > 1e-9);
        for (const auto& v : ps.points) CHECK(dot(v, cert.separator.y) >= -1e-9);
        for (double c : cert.perron.x) CHECK(c >= -1e-9);
        CHECK(verify_certificate(ps, cert.separator).pass);

        // trace identity of H = I + V^T Y(rescaled): diagonal is exactly zero
        CHECK(cert.h.trace() == 0.0);
    }
}

TEST_CASE("certify_noninterior flags rho at 1 for n = 2d misuse")
{
    // the signed basis with y_i = -v_i gives H = I - G, a permutation-like
    // matrix with spectral radius exactly 1
    PointSet ps(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    LeaveOneOutSeparators seps;
    seps.mode = geometry::SepMode::Weak;
    for (const auto& v : ps.points) seps.y.push_back(numerics::scaled(v, -1.0));
    try {
        certify_noninterior(ps, seps);
        FAIL("expected RhoNotAboveOne");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::RhoNotAboveOne);
    }
}

TEST_CASE("verify_certificate recomputes margins from raw dot products")
{
    PointSet ps(2, {{1, 0}, {0, 1}});
    geometry::SeparatorCertificate cert;
    cert.y = {1, 1};
    cert.mode = geometry::SepMode::Strict;
    cert.margin = -123.0; // stored margin must be ignored
    const auto rep = verify_certificate(ps, cert);
    CHECK(rep.pass);
    CHECK(rep.margin == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("verify_certificate boundary semantics: strict fails, weak passes")
{
    PointSet ps(2, {{1, 0}, {0, 0}});
    geometry::SeparatorCertificate cert;
    cert.y = {1, 0};
    cert.mode = geometry::SepMode::Strict;
    CHECK(!verify_certificate(ps, cert).pass);
    cert.mode = geometry::SepMode::Weak;
    CHECK(verify_certificate(ps, cert).pass);
}
