#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "convexcert/eigen.hpp"
#include "convexcert/lp.hpp"
#include "convexcert/matrix.hpp"
#include "convexcert/perron.hpp"
#include "convexcert/point_set.hpp"
#include "convexcert/rng.hpp"

#include "oracles.hpp"

using namespace convexcert;
using namespace convexcert::numerics;

TEST_CASE("gram of orthonormal pair is the identity")
{
    PointSet ps(2, {{1.0, 0.0}, {0.0, 1.0}});
    const Matrix g = gram(ps);
    CHECK(g(0, 0) == 1.0);
    CHECK(g(0, 1) == 0.0);
    CHECK(g(1, 0) == 0.0);
    CHECK(g(1, 1) == 1.0);
}

TEST_CASE("gram of the plus-minus basis has the block sign structure")
{
    PointSet ps(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    const Matrix g = gram(ps);
    const Matrix expect{{1, -1, 0, 0}, {-1, 1, 0, 0}, {0, 0, 1, -1}, {0, 0, -1, 1}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(g(i, j) == expect(i, j));
}

TEST_CASE("gram matches an independent double-loop recomputation")
{
    Xoshiro256 rng(42);
    std::vector<Vector> pts;
    for (int i = 0; i < 5; ++i)
        pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    PointSet ps(3, pts);
    const Matrix g = gram(ps);
    CHECK(g.asymmetry() == 0.0); // computed once per unordered pair
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 3; ++k) s += pts[i][k] * pts[j][k];
            CHECK(g(i, j) == Catch::Approx(s).margin(1e-15));
        }
}

TEST_CASE("symmetric_eig on a diagonal matrix sorts the spectrum")
{
    const Matrix m{{3, 0, 0}, {0, 1, 0}, {0, 0, 2}};
    const auto rep = symmetric_eig(m);
    REQUIRE(rep.eigenvalues.size() == 3);
    CHECK(rep.eigenvalues[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.eigenvalues[1] == Catch::Approx(2.0).margin(1e-12));
    CHECK(rep.eigenvalues[2] == Catch::Approx(3.0).margin(1e-12));
    CHECK(rep.psd);
    CHECK(rep.numerical_rank == 3);
}

TEST_CASE("symmetric_eig 2x2 closed form")
{
    const Matrix m{{2, 1}, {1, 2}};
    const auto rep = symmetric_eig(m);
    CHECK(rep.eigenvalues[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.eigenvalues[1] == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("symmetric_eig of the plus-minus basis gram has rank 2")
{
    PointSet ps(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    const auto rep = symmetric_eig(gram(ps));
    REQUIRE(rep.eigenvalues.size() == 4);
    CHECK(rep.eigenvalues[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(rep.eigenvalues[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(rep.eigenvalues[2] == Catch::Approx(2.0).margin(1e-12));
    CHECK(rep.eigenvalues[3] == Catch::Approx(2.0).margin(1e-12));
    CHECK(rep.numerical_rank == 2);
    CHECK(rep.psd);
    // clusters partition the index set
    std::size_t total = 0;
    for (const auto& c : rep.clusters) total += c.size();
    CHECK(total == 4);
}

TEST_CASE("symmetric_eig rejects asymmetric input")
{
    const Matrix m{{1, 2}, {0, 1}};
    CHECK_THROWS_AS(symmetric_eig(m), Error);
}

TEST_CASE("jacobi eigensystem reproduces m q = q diag(values)")
{
    Xoshiro256 rng(7);
    for (int rep = 0; rep < 8; ++rep) {
        const std::size_t n = 2 + rng.below(10);
        const Matrix m = oracles::random_symmetric(rng, n);
        const auto sys = jacobi_eigensystem(m);
        double resid = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                double mq = 0.0;
                for (std::size_t j = 0; j < n; ++j) mq += m(i, j) * sys.vectors(j, k);
                resid = std::max(resid, std::abs(mq - sys.values[k] * sys.vectors(i, k)));
            }
        }
        CHECK(resid <= 1e-10);
        // trace identity
        double sum = 0.0;
        for (double v : sys.values) sum += v;
        CHECK(sum == Catch::Approx(m.trace()).margin(n * 1e-10));
    }
}

TEST_CASE("symmetric_eig matches the characteristic-polynomial scan oracle")
{
    Xoshiro256 rng(11);
    for (int rep = 0; rep < 6; ++rep) {
        const std::size_t n = 2 + rng.below(6);
        const Matrix m = oracles::random_symmetric(rng, n);
        const auto mine = symmetric_eig(m).eigenvalues;
        const auto scan = oracles::symmetric_spectrum_scan(m, 100000, 1e-10);
        REQUIRE(scan.size() == n); // generic matrices have simple spectra
        for (std::size_t i = 0; i < n; ++i)
            CHECK(mine[i] == Catch::Approx(scan[i]).margin(1e-7));
    }
}

TEST_CASE("symmetric PSD inputs report psd")
{
    Xoshiro256 rng(13);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 1 + rng.below(8);
        const std::size_t d = 1 + rng.below(4);
        std::vector<Vector> pts;
        for (std::size_t i = 0; i < n; ++i) {
            Vector p(d);
            for (auto& c : p) c = rng.uniform(-2, 2);
            pts.push_back(p);
        }
        const auto rep_eig = symmetric_eig(gram(PointSet(d, pts)));
        CHECK(rep_eig.psd);
        CHECK(rep_eig.numerical_rank <= d);
    }
}

TEST_CASE("perron on symmetric 2x2")
{
    const Matrix m{{2, 1}, {1, 2}};
    const auto pp = perron(m);
    CHECK(pp.rho == Catch::Approx(3.0).margin(1e-9));
    CHECK(pp.x[0] == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-8));
    CHECK(pp.x[1] == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-8));
    CHECK(pp.residual <= 1e-10);
}

TEST_CASE("perron on the all-ones matrix")
{
    const Matrix m{{1, 1}, {1, 1}};
    const auto pp = perron(m);
    CHECK(pp.rho == Catch::Approx(2.0).margin(1e-9));
    CHECK(pp.x[0] == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-8));
}

TEST_CASE("perron on a nonsymmetric matrix with hand-solved spectrum")
{
    // char poly t^2 - 5 t + 4 = (t-1)(t-4): rho = 4, eigenvector (1,2)/sqrt(5)
    const Matrix m{{2, 1}, {2, 3}};
    const auto pp = perron(m);
    CHECK(pp.rho == Catch::Approx(4.0).margin(1e-9));
    CHECK(pp.x[0] == Catch::Approx(1.0 / std::sqrt(5.0)).margin(1e-8));
    CHECK(pp.x[1] == Catch::Approx(2.0 / std::sqrt(5.0)).margin(1e-8));
}

TEST_CASE("perron handles the periodic permutation matrix via the shift")
{
    const Matrix m{{0, 1}, {1, 0}};
    const auto pp = perron(m);
    CHECK(pp.rho == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("perron rejects negative entries")
{
    const Matrix m{{1, -0.5}, {0.2, 1}};
    CHECK_THROWS_AS(perron(m), Error);
}

TEST_CASE("perron reports no-convergence when the budget is too small")
{
    PerronConfig cfg;
    cfg.max_iter = 2;
    cfg.tol = 1e-14;
    const Matrix m{{2, 1}, {2, 3}};
    try {
        perron(m, cfg);
        FAIL("expected NoConvergence");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NoConvergence);
    }
}

TEST_CASE("perron properties on random positive matrices")
{
    Xoshiro256 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 1 + rng.below(12);
        const Matrix m = oracles::random_positive(rng, n);
        const auto pp = perron(m);
        // residual contract, checkable post hoc
        Vector mx = m * pp.x;
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            resid = std::max(resid, std::abs(mx[i] - pp.rho * pp.x[i]));
        CHECK(resid <= 1e-10);
        CHECK(std::abs(norm2(pp.x) - 1.0) <= 1e-12);
        // positive input => strictly positive eigenvector
        for (double v : pp.x) CHECK(v > 0.0);
        // rho >= max diagonal entry
        double dmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) dmax = std::max(dmax, m(i, i));
        CHECK(pp.rho >= dmax - 1e-10);
    }
}

TEST_CASE("perron agrees with the char-poly bisection oracle")
{
    Xoshiro256 rng(19);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 2 + rng.below(11);
        const Matrix m = oracles::random_positive(rng, n);
        const double rho_oracle = oracles::largest_real_eigenvalue(m);
        REQUIRE(std::isfinite(rho_oracle));
        CHECK(perron(m).rho == Catch::Approx(rho_oracle).margin(1e-8));
    }
}

TEST_CASE("lp_solve maximizes a bounded single variable")
{
    LpProblem p;
    p.objective = {1.0};
    p.constraints = Matrix(0, 1);
    p.lower = {0.0};
    p.upper = {1.0};
    const auto r = lp_solve(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == Catch::Approx(1.0).margin(1e-9));
    CHECK(r.solution[0] == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("lp_solve reports infeasible contradictory bounds")
{
    LpProblem p;
    p.objective = {1.0};
    p.constraints = Matrix(2, 1, {1.0, 1.0});
    p.senses = {Sense::GreaterEqual, Sense::LessEqual};
    p.rhs = {1.0, 0.0};
    p.lower = {-kInf};
    p.upper = {kInf};
    CHECK(lp_solve(p).status == LpStatus::Infeasible);
}

TEST_CASE("lp_solve detects unboundedness")
{
    LpProblem p;
    p.objective = {1.0};
    p.constraints = Matrix(1, 1, {1.0});
    p.senses = {Sense::GreaterEqual};
    p.rhs = {0.0};
    p.lower = {-kInf};
    p.upper = {kInf};
    CHECK(lp_solve(p).status == LpStatus::Unbounded);
}

TEST_CASE("lp_solve handles equalities with free variables")
{
    // max x + y s.t. x + y = 1, x - y = 0  => x = y = 1/2
    LpProblem p;
    p.objective = {1.0, 1.0};
    p.constraints = Matrix{{1.0, 1.0}, {1.0, -1.0}};
    p.senses = {Sense::Equal, Sense::Equal};
    p.rhs = {1.0, 0.0};
    p.lower = {-kInf, -kInf};
    p.upper = {kInf, kInf};
    const auto r = lp_solve(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.solution[0] == Catch::Approx(0.5).margin(1e-9));
    CHECK(r.solution[1] == Catch::Approx(0.5).margin(1e-9));
    CHECK(lp_violation(p, r.solution) <= 1e-9);
}

namespace {

// Barycentric sign test against every triangle (plus edges and vertices) of
// a planar point set: the origin is in the hull iff one subset admits
// nonnegative barycentric coordinates.
bool origin_in_planar_hull_triangles(const PointSet& ps)
{
    const std::size_t n = ps.size();
    const double tol = 1e-10;
    for (std::size_t i = 0; i < n; ++i) {
        if (norm2(ps[i]) <= tol) return true;
        for (std::size_t j = i + 1; j < n; ++j) {
            // segment test: o = a p_i + (1-a) p_j
            const auto &pi = ps[i], &pj = ps[j];
            const double cross = pi[0] * pj[1] - pi[1] * pj[0];
            if (std::abs(cross) <= tol) {
                const double dd = dot(pi, pj);
                if (dd <= tol) return true; // opposite rays
            }
            for (std::size_t k = j + 1; k < n; ++k) {
                const auto& pk = ps[k];
                const double det = (pi[0] - pk[0]) * (pj[1] - pk[1]) -
                                   (pj[0] - pk[0]) * (pi[1] - pk[1]);
                if (std::abs(det) <= tol) continue;
                const double l1 = ((pj[1] - pk[1]) * (-pk[0]) + (pk[0] - pj[0]) * (-pk[1])) / det;
                const double l2 = ((pk[1] - pi[1]) * (-pk[0]) + (pi[0] - pk[0]) * (-pk[1])) / det;
                const double l3 = 1.0 - l1 - l2;
                if (l1 >= -tol && l2 >= -tol && l3 >= -tol) return true;
            }
        }
    }
    return false;
}

} // namespace

TEST_CASE("membership LP agrees with the exhaustive triangle oracle")
{
    Xoshiro256 rng(23);
    int inside_seen = 0, outside_seen = 0;
    for (int rep = 0; rep < 60; ++rep) {
        std::vector<Vector> pts;
        const bool shifted = rep % 2 == 0;
        for (int i = 0; i < 6; ++i) {
            Vector p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
            if (shifted) {
                p[0] += 0.8; // biases the instance toward Outside
            }
            pts.push_back(p);
        }
        PointSet ps(2, pts);

        LpProblem p;
        p.objective.assign(6, 0.0);
        p.constraints = Matrix(3, 6);
        for (std::size_t j = 0; j < 6; ++j) {
            p.constraints(0, j) = pts[j][0];
            p.constraints(1, j) = pts[j][1];
            p.constraints(2, j) = 1.0;
        }
        p.senses = {Sense::Equal, Sense::Equal, Sense::Equal};
        p.rhs = {0.0, 0.0, 1.0};
        const bool lp_inside = lp_solve(p).status == LpStatus::Optimal;
        const bool oracle_inside = origin_in_planar_hull_triangles(ps);
        CHECK(lp_inside == oracle_inside);
        (oracle_inside ? inside_seen : outside_seen)++;
    }
    CHECK(inside_seen > 0);
    CHECK(outside_seen > 0);
}
