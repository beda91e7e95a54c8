#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "convexcert/rankin.hpp"
#include "convexcert/rng.hpp"

#include "oracles.hpp"

using namespace convexcert;
using namespace convexcert::rankin;
using numerics::Matrix;
using numerics::Vector;
using numerics::dot;
using numerics::norm2;

TEST_CASE("check_angles accepts the planar simplex directions")
{
    const double s = std::sqrt(3.0) / 2.0;
    PointSet ps(2, {{1.0, 0.0}, {-0.5, s}, {-0.5, -s}});
    const auto rep = check_angles(ps, RankinMode::Obtuse);
    CHECK(rep.predicate_holds);
    CHECK(rep.n == 3);
    CHECK(rep.bound == 3);
    CHECK(rep.within_bound);
    CHECK(rep.max_pair_dot == Catch::Approx(-0.5).margin(1e-12));
}

TEST_CASE("check_angles accepts the signed basis in non-acute mode")
{
    PointSet ps(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    const auto rep = check_angles(ps, RankinMode::NonAcute);
    CHECK(rep.predicate_holds);
    CHECK(rep.n == 4);
    CHECK(rep.bound == 4);
    CHECK(rep.within_bound);
    CHECK(!rep.normalized);
}

TEST_CASE("check_angles rejects an added diagonal direction")
{
    const double r = 1.0 / std::sqrt(2.0);
    PointSet ps(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {r, r}});
    const auto rep = check_angles(ps, RankinMode::NonAcute);
    CHECK(!rep.predicate_holds);
    CHECK(rep.max_pair_dot > 0.0);
    CHECK(!rep.within_bound); // n = 5 > 2d = 4
}

TEST_CASE("check_angles rejects zero vectors")
{
    PointSet ps(2, {{1, 0}, {0, 0}});
    CHECK_THROWS_AS(check_angles(ps, RankinMode::Obtuse), Error);
}

TEST_CASE("check_angles normalizes non-unit non-acute inputs and reports it")
{
    PointSet ps(2, {{2, 0}, {0, 3}});
    const auto rep = check_angles(ps, RankinMode::NonAcute);
    CHECK(rep.predicate_holds);
    CHECK(rep.normalized);
}

TEST_CASE("extremal_config obtuse in 1-d is the signed pair")
{
    const auto ps = extremal_config(1, RankinMode::Obtuse);
    REQUIRE(ps.size() == 2);
    CHECK(dot(ps[0], ps[1]) == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("extremal_config non-acute in 2-d is the signed basis")
{
    const auto ps = extremal_config(2, RankinMode::NonAcute);
    REQUIRE(ps.size() == 4);
    const auto rep = check_angles(ps, RankinMode::NonAcute);
    CHECK(rep.predicate_holds);
    CHECK(rep.n == rep.bound);
}

TEST_CASE("extremal_config obtuse in 5-d has pairwise dots -1/5")
{
    const auto ps = extremal_config(5, RankinMode::Obtuse);
    REQUIRE(ps.size() == 6);
    // Gram must equal (1 + 1/d) I - (1/d) J entrywise
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(norm2(ps[i]) == Catch::Approx(1.0).margin(1e-12));
        for (std::size_t j = i + 1; j < 6; ++j)
            CHECK(dot(ps[i], ps[j]) == Catch::Approx(-0.2).margin(1e-12));
    }
}

TEST_CASE("extremal configs are tight for every dimension up to 16")
{
    for (std::size_t d = 1; d <= 16; ++d) {
        const auto obtuse = extremal_config(d, RankinMode::Obtuse);
        const auto rep_o = check_angles(obtuse, RankinMode::Obtuse);
        CHECK(rep_o.predicate_holds);
        CHECK(obtuse.size() == d + 1);
        CHECK(rep_o.within_bound);

        const auto nonacute = extremal_config(d, RankinMode::NonAcute);
        const auto rep_n = check_angles(nonacute, RankinMode::NonAcute);
        CHECK(rep_n.predicate_holds);
        CHECK(nonacute.size() == 2 * d);
        CHECK(rep_n.within_bound);
    }
}

TEST_CASE("adversarial attempts at d+2 obtuse vectors always fail")
{
    Xoshiro256 rng(401);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t d = 1 + rng.below(6);
        std::vector<Vector> pts;
        for (std::size_t i = 0; i < d + 2; ++i) {
            Vector p(d);
            double np = 0.0;
            while (np < 1e-3) {
                for (auto& c : p) c = rng.uniform(-1, 1);
                np = norm2(p);
            }
            pts.push_back(p);
        }
        const auto r = check_angles(PointSet(d, pts), RankinMode::Obtuse);
        CHECK(!r.predicate_holds); // no false acceptance, ever
    }
}

TEST_CASE("positivity bridge: lambda I - G is entrywise positive for obtuse sets")
{
    for (std::size_t d = 1; d <= 8; ++d) {
        const auto ps = extremal_config(d, RankinMode::Obtuse);
        const Matrix g = numerics::gram(ps);
        double diag_max = 0.0;
        for (std::size_t i = 0; i < g.rows(); ++i) diag_max = std::max(diag_max, g(i, i));
        const double lambda = diag_max + 0.5;
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j)
                CHECK((i == j ? lambda : 0.0) - g(i, j) > 0.0);
    }
}

TEST_CASE("trace identity for non-acute unit sets")
{
    Xoshiro256 rng(409);
    for (std::size_t d = 1; d <= 8; ++d) {
        const auto ps = extremal_config(d, RankinMode::NonAcute);
        const Matrix g = numerics::gram(ps);
        const double n = static_cast<double>(ps.size());
        CHECK(std::abs(n - g.trace()) <= n * 1e-12); // tr(I - G) = 0
    }
}

TEST_CASE("spectral_witness flags the 4x4 matrix with off-diagonal -1/3 at d=2")
{
    Matrix g(4, 4, 1.0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) g(i, j) = -1.0 / 3.0;
    const auto rep = spectral_witness(g, 2, RankinMode::Obtuse);
    CHECK(rep.verdict == Realizability::Unrealizable);
    REQUIRE(rep.spectrum.eigenvalues.size() == 4);
    // closed-form spectrum of aI + bJ: {0, 4/3, 4/3, 4/3}
    CHECK(rep.spectrum.eigenvalues[0] == Catch::Approx(0.0).margin(1e-10));
    for (int k = 1; k < 4; ++k)
        CHECK(rep.spectrum.eigenvalues[k] == Catch::Approx(4.0 / 3.0).margin(1e-10));
    CHECK(rep.spectrum.numerical_rank == 3);
    CHECK(!rep.within_bound);
    // the same matrix is a fine Gram at d = 3 (simplex directions)
    CHECK(spectral_witness(g, 3, RankinMode::Obtuse).verdict == Realizability::Realizable);
}

TEST_CASE("spectral_witness accepts the signed-basis Gram at d=2")
{
    PointSet ps(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    const Matrix g = numerics::gram(ps);
    const auto rep = spectral_witness(g, 2, RankinMode::NonAcute);
    CHECK(rep.verdict == Realizability::Realizable);
    CHECK(rep.trace_h == Catch::Approx(0.0).margin(1e-12)); // tr(I4 - g) exactly 0
}

TEST_CASE("spectral_witness accepts the orthonormal triple at d=3")
{
    const auto rep = spectral_witness(Matrix::identity(3), 3, RankinMode::NonAcute);
    CHECK(rep.verdict == Realizability::Realizable);
    CHECK(rep.n == 3);
    CHECK(rep.within_bound); // 3 <= 6
}

TEST_CASE("spectral_witness reports indeterminate inside the rank band")
{
    // eigenvalues {5e-9, 2 - 5e-9}: the small one sits inside the relative
    // rank band at d = 1, so the verdict must not be forced either way
    const double off = 1.0 - 5e-9;
    Matrix g{{1.0, -off}, {-off, 1.0}};
    const auto rep = spectral_witness(g, 1, RankinMode::Obtuse);
    CHECK(rep.verdict == Realizability::Indeterminate);
}

TEST_CASE("spectral_witness rejects mode violations and asymmetry")
{
    Matrix pos(2, 2, 1.0); // positive off-diagonal cannot be obtuse
    CHECK_THROWS_AS(spectral_witness(pos, 2, RankinMode::Obtuse), Error);
    Matrix asym{{1.0, 0.2}, {-0.2, 1.0}};
    CHECK_THROWS_AS(spectral_witness(asym, 2, RankinMode::NonAcute), Error);
}

TEST_CASE("every generated Gram passes realizability at its true dimension")
{
    Xoshiro256 rng(419);
    for (int rep = 0; rep < 15; ++rep) {
        const std::size_t d = 1 + rng.below(5);
        const auto ps = extremal_config(d, RankinMode::Obtuse);
        const auto report = spectral_witness(numerics::gram(ps), d, RankinMode::Obtuse);
        CHECK(report.verdict == Realizability::Realizable);
        CHECK(report.spectrum.psd);
    }
}
