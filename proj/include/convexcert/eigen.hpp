#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "convexcert/errors.hpp"
#include "convexcert/matrix.hpp"
#include "convexcert/point_set.hpp"

namespace convexcert::numerics {

/// Gram matrix G(i,j) = <v_i, v_j>. Each unordered pair is computed once, so
/// the result is symmetric by construction.
inline Matrix gram(const PointSet& ps)
{
    require(ps.size() >= 1, Errc::InvalidInput, "gram: need at least one point");
    const std::size_t n = ps.size();
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double d = dot(ps[i], ps[j]);
            g(i, j) = d;
            g(j, i) = d;
        }
    return g;
}

struct SpectralConfig {
    double tol = 1e-10;         // eigenvalue accuracy; also the symmetry gate
    double psd_slack = 1e-9;    // min eigenvalue >= -psd_slack counts as PSD
    double rank_rel = 1e-8;     // rank threshold = rank_rel * max |eigenvalue|
    double cluster_tol = 1e-7;  // eigenvalues within this group into one cluster
    std::size_t max_sweeps = 64;
};

/// Eigenvalues sorted non-decreasing with multiplicity clusters and
/// PSD/rank verdicts for a symmetric matrix.
struct SpectralReport {
    std::vector<double> eigenvalues;                  // non-decreasing
    std::vector<std::vector<std::size_t>> clusters;   // partition of indices
    bool psd = false;
    std::size_t numerical_rank = 0;
    double rank_threshold = 0.0;
};

/// Full symmetric eigendecomposition: values non-decreasing, vectors(.,k) the
/// eigenvector of values[k].
struct EigenSystem {
    std::vector<double> values;
    Matrix vectors; // columns are eigenvectors
    std::size_t sweeps = 0;
};

/// Cyclic-by-row Jacobi rotations. Input must be square and symmetric within
/// cfg.tol; the iteration itself runs on the symmetrized matrix.
inline EigenSystem jacobi_eigensystem(const Matrix& m, const SpectralConfig& cfg = {})
{
    require(m.square(), Errc::InvalidInput, "jacobi: matrix must be square");
    require(m.asymmetry() <= cfg.tol, Errc::NotSymmetric,
            "jacobi: matrix not symmetric within tolerance");
    const std::size_t n = m.rows();
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
    Matrix q = Matrix::identity(n);

    const double scale = std::max(1.0, a.max_abs());
    const double stop = 1e-15 * scale * static_cast<double>(n);

    std::size_t sweep = 0;
    for (; sweep < cfg.max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t qq = p + 1; qq < n; ++qq) off = std::max(off, std::abs(a(p, qq)));
        if (off <= stop) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const double apq = a(p, r);
                if (std::abs(apq) <= stop * 1e-2) continue;
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p), arr = a(r, r);
                a(p, p) = app - t * apq;
                a(r, r) = arr + t * apq;
                a(p, r) = 0.0;
                a(r, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k != p && k != r) {
                        const double akp = a(k, p), akr = a(k, r);
                        a(k, p) = akp - s * (akr + tau * akp);
                        a(p, k) = a(k, p);
                        a(k, r) = akr + s * (akp - tau * akr);
                        a(r, k) = a(k, r);
                    }
                    const double qkp = q(k, p), qkr = q(k, r);
                    q(k, p) = qkp - s * (qkr + tau * qkp);
                    q(k, r) = qkr + s * (qkp - tau * qkr);
                }
            }
        }
    }

    EigenSystem sys;
    sys.sweeps = sweep;
    sys.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) sys.values[i] = a(i, i);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sys.values[x] < sys.values[y]; });
    std::vector<double> sorted(n);
    Matrix qs(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted[k] = sys.values[order[k]];
        for (std::size_t i = 0; i < n; ++i) qs(i, k) = q(i, order[k]);
    }
    sys.values = std::move(sorted);
    sys.vectors = std::move(qs);
    return sys;
}

inline SpectralReport make_spectral_report(const std::vector<double>& values,
                                           const SpectralConfig& cfg = {})
{
    SpectralReport rep;
    rep.eigenvalues = values;
    const std::size_t n = values.size();

    double max_abs = 0.0;
    for (double v : values) max_abs = std::max(max_abs, std::abs(v));
    rep.rank_threshold = cfg.rank_rel * max_abs;
    rep.numerical_rank = 0;
    for (double v : values)
        if (std::abs(v) > rep.rank_threshold) ++rep.numerical_rank;
    rep.psd = n == 0 || values.front() >= -cfg.psd_slack;

    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && values[end] - values[start] <= cfg.cluster_tol) ++end;
        std::vector<std::size_t> cluster(end - start);
        std::iota(cluster.begin(), cluster.end(), start);
        rep.clusters.push_back(std::move(cluster));
        start = end;
    }
    return rep;
}

/// Spectrum of a symmetric matrix with clusters, PSD and rank verdicts.
inline SpectralReport symmetric_eig(const Matrix& m, const SpectralConfig& cfg = {})
{
    return make_spectral_report(jacobi_eigensystem(m, cfg).values, cfg);
}

inline SpectralReport symmetric_eig(const Matrix& m, double tol)
{
    SpectralConfig cfg;
    cfg.tol = tol;
    return symmetric_eig(m, cfg);
}

/// Numerical rank of an arbitrary rectangular matrix via the spectrum of
/// M^T M (singular values squared). The relative threshold is applied to
/// singular values, i.e. sigma > rank_rel_sigma * sigma_max.
inline std::size_t numerical_rank(const Matrix& m, double rank_rel_sigma = 1e-7)
{
    const Matrix mtm = m.transposed() * m;
    SpectralConfig cfg;
    const auto values = jacobi_eigensystem(mtm, cfg).values;
    double max_val = 0.0;
    for (double v : values) max_val = std::max(max_val, v);
    if (max_val <= 0.0) return 0;
    const double thresh = rank_rel_sigma * rank_rel_sigma * max_val;
    std::size_t rank = 0;
    for (double v : values)
        if (v > thresh) ++rank;
    return rank;
}

} // namespace convexcert::numerics
