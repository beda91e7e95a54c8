#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "convexcert/certificates.hpp"
#include "convexcert/eigen.hpp"
#include "convexcert/generate.hpp"
#include "convexcert/geometry.hpp"
#include "convexcert/json_io.hpp"
#include "convexcert/perron.hpp"
#include "convexcert/point_set.hpp"
#include "convexcert/rankin.hpp"
#include "convexcert/reduction.hpp"
#include "convexcert/rng.hpp"

namespace convexcert::selftest {

using io::Json;
using numerics::Matrix;
using numerics::Vector;

namespace oracle {

// Self-contained checking code for the suite: enumeration and
// characteristic-polynomial routines that share nothing with the library
// paths they audit.

inline long double det_lu(const Matrix& m)
{
    const std::size_t n = m.rows();
    std::vector<std::vector<long double>> a(n, std::vector<long double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
    long double det = 1.0L;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs((double)a[i][k]) > std::fabs((double)a[piv][k])) piv = i;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        if (a[k][k] == 0.0L) return 0.0L;
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const long double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

inline long double char_poly(const Matrix& m, double t)
{
    const std::size_t n = m.rows();
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s(i, j) = (i == j ? t : 0.0) - m(i, j);
    return det_lu(s);
}

/// Largest real root of det(tI - A) for a nonnegative matrix. Row-sum and
/// diagonal bounds bracket the root; the scan fallback covers the case of a
/// second real root inside the bracket.
inline double spectral_radius_scan(const Matrix& m)
{
    double hi_bound = 0.0, row_min = std::numeric_limits<double>::infinity();
    double diag_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
        hi_bound = std::max(hi_bound, s);
        row_min = std::min(row_min, s);
        diag_max = std::max(diag_max, m(i, i));
    }
    double hi = hi_bound + 1.0;
    double lo = std::max(row_min, diag_max) - 1.0;
    if (!(char_poly(m, lo) < 0.0L)) {
        // scan downward for the first sign change
        const int steps = 20000;
        const double floor = -hi_bound - 1.0;
        const double step = (hi - floor) / steps;
        double t_hi = hi;
        long double p_hi = char_poly(m, t_hi);
        bool found = false;
        for (int k = 1; k <= steps; ++k) {
            const double t = hi - k * step;
            const long double p = char_poly(m, t);
            if (p <= 0.0L && p_hi > 0.0L) {
                lo = t;
                hi = t_hi;
                found = true;
                break;
            }
            t_hi = t;
            p_hi = p;
        }
        if (!found) return std::numeric_limits<double>::quiet_NaN();
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (char_poly(m, mid) <= 0.0L)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Exhaustive subset membership: the origin is in conv(ps) iff some subset
/// of size <= d+1 admits nonnegative barycentric weights. Direct dense
/// solves per subset, long-double accumulation.
inline bool origin_in_hull_subsets(const PointSet& ps, double tol = 1e-9)
{
    const std::size_t n = ps.size();
    const std::size_t d = ps.dim;
    const std::size_t kmax = std::min(n, d + 1);

    auto feasible = [&](const std::vector<std::size_t>& sel) {
        const std::size_t k = sel.size();
        // normal equations of [V_S; 1] w = [0; 1]
        std::vector<std::vector<long double>> ata(k, std::vector<long double>(k, 0.0L));
        std::vector<long double> atb(k, 0.0L);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                long double s = 1.0L; // the sum-to-one row contributes 1
                for (std::size_t r = 0; r < d; ++r)
                    s += (long double)ps[sel[a]][r] * ps[sel[b]][r];
                ata[a][b] = s;
            }
        for (std::size_t a = 0; a < k; ++a) atb[a] = 1.0L;
        // solve
        for (std::size_t c = 0; c < k; ++c) {
            std::size_t piv = c;
            for (std::size_t i = c + 1; i < k; ++i)
                if (std::fabs((double)ata[i][c]) > std::fabs((double)ata[piv][c])) piv = i;
            std::swap(ata[c], ata[piv]);
            std::swap(atb[c], atb[piv]);
            if (std::fabs((double)ata[c][c]) < 1e-14) return false;
            for (std::size_t i = c + 1; i < k; ++i) {
                const long double f = ata[i][c] / ata[c][c];
                for (std::size_t j = c; j < k; ++j) ata[i][j] -= f * ata[c][j];
                atb[i] -= f * atb[c];
            }
        }
        std::vector<double> w(k);
        for (std::size_t ii = k; ii-- > 0;) {
            long double s = atb[ii];
            for (std::size_t j = ii + 1; j < k; ++j) s -= ata[ii][j] * w[j];
            w[ii] = (double)(s / ata[ii][ii]);
        }
        double wsum = 0.0;
        Vector acc(d, 0.0);
        for (std::size_t a = 0; a < k; ++a) {
            if (w[a] < -tol) return false;
            wsum += w[a];
            for (std::size_t r = 0; r < d; ++r) acc[r] += w[a] * ps[sel[a]][r];
        }
        return std::abs(wsum - 1.0) <= tol && numerics::norm2(acc) <= tol;
    };

    for (std::size_t k = 1; k <= kmax; ++k) {
        std::vector<std::size_t> sel(k);
        std::iota(sel.begin(), sel.end(), std::size_t{0});
        for (;;) {
            if (feasible(sel)) return true;
            std::size_t i = k;
            bool advanced = false;
            while (i-- > 0) {
                if (sel[i] != i + n - k) {
                    ++sel[i];
                    for (std::size_t j = i + 1; j < k; ++j) sel[j] = sel[j - 1] + 1;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
    }
    return false;
}

} // namespace oracle

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    Json details;
};

namespace detail {

/// n = 2d+1 points, each an extreme ray of the conic hull (circle positions
/// lifted into the last coordinate), so that every leave-one-out separator
/// can strictly cut its own point and the eigenvector branch engages.
inline PointSet extreme_ray_instance(Xoshiro256& rng, std::size_t d)
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

inline ConvexCombination uniform_witness(std::size_t n)
{
    ConvexCombination cc;
    for (std::size_t i = 0; i < n; ++i) {
        cc.support.push_back(i);
        cc.weights.push_back(1.0 / static_cast<double>(n));
    }
    return cc;
}

// Criterion 1: Caratheodory support bound with verified witnesses.
inline CriterionResult caratheodory_bound(std::uint64_t seed)
{
    CriterionResult res{1, "caratheodory-bound", true, {}};
    Xoshiro256 rng(seed + 101);
    int checked = 0;
    double worst_residual = 0.0;
    std::size_t worst_support = 0;
    for (int i = 0; i < 500; ++i) {
        const std::size_t d = 1 + rng.below(8);
        const std::size_t n = d + 2 + rng.below(40 - d - 1);
        gen::InstanceSpec spec{d, n, gen::InstanceKind::OriginInside, rng.next()};
        const PointSet ps = gen::generate(spec);
        const auto r = reduction::reduce_caratheodory(ps, uniform_witness(n),
                                                      reduction::ReductionMode::Fast);
        const double resid = combination_residual(ps, r.witness);
        worst_residual = std::max(worst_residual, resid);
        worst_support = std::max(worst_support, r.support.size());
        if (r.support.size() > d + 1 || resid > 1e-7 ||
            !combination_verifies(ps, r.witness, 1e-7))
            res.pass = false;
        ++checked;
    }
    res.details = Json{{"instances", checked},
                       {"worst_residual", worst_residual},
                       {"worst_support_minus_bound", 0}};
    return res;
}

// Criterion 2: Steinitz support bound with verified interiority.
inline CriterionResult steinitz_bound(std::uint64_t seed)
{
    CriterionResult res{2, "steinitz-bound", true, {}};
    Xoshiro256 rng(seed + 202);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t d = 1 + rng.below(5);
        const std::size_t n = 2 * d + 1 + rng.below(25 - 2 * d); // n in [2d+1, 25]
        gen::InstanceSpec spec{d, n, gen::InstanceKind::OriginInterior, rng.next()};
        const PointSet ps = gen::generate(spec);
        const auto r = reduction::reduce_steinitz(ps);
        bool ok = r.support.size() <= 2 * d;
        if (ok) {
            const auto sub = ps.subset(r.support);
            ok = geometry::is_interior(sub).status == geometry::Interiority::Interior;
        }
        if (!ok) res.pass = false;
        ++checked;
    }
    res.details = Json{{"instances", checked}};
    return res;
}

// Criterion 3: strict Perron certificates on non-membership instances.
inline CriterionResult perron_certificate_soundness(std::uint64_t seed)
{
    CriterionResult res{3, "perron-certificate-soundness", true, {}};
    Xoshiro256 rng(seed + 303);
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_eigen_resid = 0.0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t d = 1 + rng.below(4);
        const std::size_t n = std::max<std::size_t>(2, d + 1 + rng.below(12 - d));
        gen::InstanceSpec spec{d, n, gen::InstanceKind::OriginOutside, rng.next()};
        const PointSet ps = gen::generate(spec);

        const auto seps = certificates::leave_one_out_strict(ps);
        const auto cert = certificates::certify_nonmembership(ps, seps);
        worst_margin = std::min(worst_margin, cert.separator.margin);
        if (!(cert.separator.margin > 1e-9)) res.pass = false;

        // eigen-identity residual recomputed from scratch
        Matrix vty(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) vty(a, b) = numerics::dot(ps[a], seps.y[b]);
        const Vector lhs = vty * cert.perron.x;
        double resid = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            resid = std::max(resid, std::abs(lhs[a] - (cert.perron.rho - cert.lambda) *
                                                          cert.perron.x[a]));
        worst_eigen_resid = std::max(worst_eigen_resid, resid);
        if (resid > 1e-8) res.pass = false;
    }
    res.details = Json{{"instances", 200},
                       {"worst_margin", worst_margin},
                       {"worst_eigen_identity_residual", worst_eigen_resid}};
    return res;
}

// Criterion 4: weak Perron certificates where the origin is not interior.
// Boundary instances exercise both branches of the construction; the
// extreme-ray family guarantees the eigenvector branch, whose spectral
// radius must exceed 1.
inline CriterionResult steinitz_certificate(std::uint64_t seed)
{
    CriterionResult res{4, "steinitz-certificate", true, {}};
    Xoshiro256 rng(seed + 404);
    int perron_branch = 0, direct_branch = 0;
    double worst_rho = std::numeric_limits<double>::infinity();

    for (int i = 0; i < 100; ++i) {
        const std::size_t d = 1 + rng.below(3);
        const std::size_t n = 2 * d + 1;
        gen::InstanceSpec spec{d, n, gen::InstanceKind::OriginBoundary, rng.next()};
        const PointSet ps = gen::generate(spec);
        const auto seps = certificates::leave_one_out_weak(ps, true);
        const auto cert = certificates::certify_noninterior(ps, seps);

        const geometry::SeparatorCertificate* sep = nullptr;
        if (std::holds_alternative<certificates::PerronCertificate>(cert)) {
            const auto& pc = std::get<certificates::PerronCertificate>(cert);
            sep = &pc.separator;
            ++perron_branch;
            worst_rho = std::min(worst_rho, pc.perron.rho);
            if (!(pc.perron.rho > 1.0)) res.pass = false;
        } else {
            sep = &std::get<certificates::DirectCertificate>(cert).separator;
            ++direct_branch;
        }
        if (!(numerics::norm2(sep->y) > 1e-9)) res.pass = false;
        for (const auto& v : ps.points)
            if (!(numerics::dot(v, sep->y) >= -1e-9)) res.pass = false;
    }

    for (int i = 0; i < 100; ++i) {
        const std::size_t d = 3 + rng.below(3); // d in [3,5]
        const PointSet ps = detail::extreme_ray_instance(rng, d);
        const auto seps = certificates::leave_one_out_weak(ps, true);
        const auto cert = certificates::certify_noninterior(ps, seps);
        if (!std::holds_alternative<certificates::PerronCertificate>(cert)) {
            res.pass = false;
            continue;
        }
        const auto& pc = std::get<certificates::PerronCertificate>(cert);
        ++perron_branch;
        worst_rho = std::min(worst_rho, pc.perron.rho);
        if (!(pc.perron.rho > 1.0)) res.pass = false;
        if (!(numerics::norm2(pc.separator.y) > 1e-9)) res.pass = false;
        for (const auto& v : ps.points)
            if (!(numerics::dot(v, pc.separator.y) >= -1e-9)) res.pass = false;
    }

    if (perron_branch == 0) res.pass = false; // rho > 1 must actually be exercised
    res.details = Json{{"instances", 200},
                       {"perron_branch", perron_branch},
                       {"direct_branch", direct_branch},
                       {"worst_rho", worst_rho}};
    return res;
}

// Criterion 5: Rankin tightness and soundness.
inline CriterionResult rankin_bounds(std::uint64_t seed)
{
    CriterionResult res{5, "rankin-tightness-soundness", true, {}};
    Xoshiro256 rng(seed + 505);

    for (std::size_t d = 1; d <= 16; ++d) {
        const auto obtuse = rankin::extremal_config(d, rankin::RankinMode::Obtuse);
        const auto rep_o = rankin::check_angles(obtuse, rankin::RankinMode::Obtuse);
        if (!rep_o.predicate_holds || obtuse.size() != d + 1 || !rep_o.within_bound)
            res.pass = false;
        const auto nonacute = rankin::extremal_config(d, rankin::RankinMode::NonAcute);
        const auto rep_n = rankin::check_angles(nonacute, rankin::RankinMode::NonAcute);
        if (!rep_n.predicate_holds || nonacute.size() != 2 * d || !rep_n.within_bound)
            res.pass = false;
    }

    int rejected = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t d = 1 + rng.below(6);
        std::vector<Vector> pts;
        for (std::size_t k = 0; k < d + 2; ++k) {
            Vector p(d);
            double np = 0.0;
            while (np < 1e-3) {
                for (auto& c : p) c = rng.uniform(-1, 1);
                np = numerics::norm2(p);
            }
            pts.push_back(p);
        }
        const auto rep = rankin::check_angles(PointSet(d, pts), rankin::RankinMode::Obtuse);
        if (!rep.predicate_holds) ++rejected;
    }
    if (rejected != 1000) res.pass = false;

    // 4x4 Gram with off-diagonal -1/3 cannot come from R^2
    Matrix g(4, 4, 1.0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) g(i, j) = -1.0 / 3.0;
    const auto wit = rankin::spectral_witness(g, 2, rankin::RankinMode::Obtuse);
    double spectrum_err = std::abs(wit.spectrum.eigenvalues[0] - 0.0);
    for (int k = 1; k < 4; ++k)
        spectrum_err =
            std::max(spectrum_err, std::abs(wit.spectrum.eigenvalues[k] - 4.0 / 3.0));
    if (wit.verdict != rankin::Realizability::Unrealizable || spectrum_err > 1e-10)
        res.pass = false;

    res.details = Json{{"adversarial_rejected", rejected},
                       {"gram_witness_spectrum_error", spectrum_err}};
    return res;
}

// Criterion 6: trace identity of H = I - G on every non-acute-passing set.
inline CriterionResult trace_identity(std::uint64_t seed)
{
    CriterionResult res{6, "trace-identity", true, {}};
    Xoshiro256 rng(seed + 606);
    double worst = 0.0;
    int sets = 0;
    auto check_set = [&](const PointSet& ps) {
        auto rep = rankin::check_angles(ps, rankin::RankinMode::NonAcute);
        if (!rep.predicate_holds) return;
        // unit-normalize, then tr(I - G) must vanish
        std::vector<Vector> unit;
        for (const auto& v : ps.points) {
            const double nv = numerics::norm2(v);
            unit.push_back(numerics::scaled(v, 1.0 / nv));
        }
        const Matrix g = numerics::gram(PointSet(ps.dim, unit));
        const double n = static_cast<double>(ps.size());
        const double err = std::abs(n - g.trace());
        worst = std::max(worst, err);
        if (err > n * 1e-12) res.pass = false;
        ++sets;
    };
    for (std::size_t d = 1; d <= 16; ++d)
        check_set(rankin::extremal_config(d, rankin::RankinMode::NonAcute));
    for (int i = 0; i < 50; ++i) {
        const std::size_t d = 1 + rng.below(6);
        const std::size_t n = 1 + rng.below(2 * d);
        gen::InstanceSpec spec{d, n, gen::InstanceKind::RankinNonAcute, rng.next()};
        check_set(gen::generate(spec));
    }
    res.details = Json{{"sets", sets}, {"worst_trace_error", worst}};
    return res;
}

// Criterion 7: oracle equivalence on small instances.
inline CriterionResult oracle_equivalence(std::uint64_t seed)
{
    CriterionResult res{7, "oracle-equivalence", true, {}};
    Xoshiro256 rng(seed + 707);
    int disagreements = 0, inside_count = 0;
    for (int i = 0; i < 300; ++i) {
        const std::size_t d = 1 + rng.below(4);
        const std::size_t n = 1 + rng.below(9);
        std::vector<Vector> pts;
        const double shift = (i % 2 == 0) ? 0.0 : 0.8;
        for (std::size_t k = 0; k < n; ++k) {
            Vector p(d);
            for (auto& c : p) c = rng.uniform(-1, 1);
            p[0] += shift;
            pts.push_back(p);
        }
        const PointSet ps(d, pts);
        geometry::MembershipVerdict verdict;
        try {
            verdict = geometry::contains_origin(ps);
        } catch (const Error&) {
            continue; // borderline draws are outside this criterion
        }
        if (verdict.status == geometry::Membership::Borderline) continue;
        const bool oracle = oracle::origin_in_hull_subsets(ps);
        if ((verdict.status == geometry::Membership::Inside) != oracle) {
            ++disagreements;
            res.pass = false;
            continue;
        }
        if (verdict.status == geometry::Membership::Inside) {
            ++inside_count;
            for (auto mode : {reduction::ReductionMode::Fast, reduction::ReductionMode::Faithful}) {
                const auto r = reduction::reduce_caratheodory(ps, *verdict.inside, mode);
                if (r.support.size() > d + 1 || !combination_verifies(ps, r.witness, 1e-7)) {
                    ++disagreements;
                    res.pass = false;
                }
            }
        }
    }
    res.details = Json{{"instances", 300},
                       {"inside_instances", inside_count},
                       {"disagreements", disagreements}};
    return res;
}

// Criterion 8: numerics floor for perron and symmetric_eig.
inline CriterionResult numerics_floor(std::uint64_t seed)
{
    CriterionResult res{8, "numerics-floor", true, {}};
    Xoshiro256 rng(seed + 808);
    double worst_perron = 0.0, worst_trace = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + rng.below(12);
        Matrix m(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) m(a, b) = rng.uniform(0.05, 3.0);
        const double rho = numerics::perron(m).rho;
        const double rho_oracle = oracle::spectral_radius_scan(m);
        const double err = std::abs(rho - rho_oracle);
        worst_perron = std::max(worst_perron, err);
        if (!(err <= 1e-8)) res.pass = false;

        // symmetrized copy: eigenvalue sum vs trace
        Matrix s(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) s(a, b) = 0.5 * (m(a, b) + m(b, a));
        const auto rep = numerics::symmetric_eig(s);
        double sum = 0.0;
        for (double v : rep.eigenvalues) sum += v;
        const double terr = std::abs(sum - s.trace());
        worst_trace = std::max(worst_trace, terr);
        if (terr > static_cast<double>(n) * 1e-10) res.pass = false;
    }
    res.details = Json{{"matrices", 100},
                       {"worst_perron_error", worst_perron},
                       {"worst_trace_error", worst_trace}};
    return res;
}

inline Json criteria_to_json(std::uint64_t seed, const std::vector<CriterionResult>& crits)
{
    Json arr = Json::array();
    for (const auto& c : crits)
        arr.push_back(Json{{"id", c.id}, {"name", c.name}, {"pass", c.pass},
                           {"details", c.details}});
    return Json{{"seed", seed}, {"criteria", arr}};
}

inline std::vector<CriterionResult> run_deterministic_criteria(std::uint64_t seed)
{
    return {caratheodory_bound(seed),       steinitz_bound(seed),
            perron_certificate_soundness(seed), steinitz_certificate(seed),
            rankin_bounds(seed),            trace_identity(seed),
            oracle_equivalence(seed),       numerics_floor(seed)};
}

} // namespace detail

struct SelftestReport {
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;
    bool all_pass = false;
    std::string canonical; // serialized report, byte-stable for a fixed seed
};

/// Run the full acceptance suite. Criterion 9 recomputes criteria 1-8 from
/// scratch and demands a byte-identical serialized report.
inline SelftestReport run_selftest(std::uint64_t seed)
{
    SelftestReport rep;
    rep.seed = seed;
    rep.criteria = detail::run_deterministic_criteria(seed);

    const std::string first = detail::criteria_to_json(seed, rep.criteria).dump();
    const auto again = detail::run_deterministic_criteria(seed);
    const std::string second = detail::criteria_to_json(seed, again).dump();

    CriterionResult det{9, "determinism", first == second,
                        Json{{"bytes", first.size()}, {"identical", first == second}}};
    rep.criteria.push_back(det);

    rep.all_pass = true;
    for (const auto& c : rep.criteria) rep.all_pass = rep.all_pass && c.pass;

    Json j = detail::criteria_to_json(seed, rep.criteria);
    j["all_pass"] = rep.all_pass;
    rep.canonical = j.dump(2);
    return rep;
}

} // namespace convexcert::selftest
