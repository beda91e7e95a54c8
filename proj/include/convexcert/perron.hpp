#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "convexcert/errors.hpp"
#include "convexcert/matrix.hpp"

namespace convexcert::numerics {

struct PerronConfig {
    double tol = 1e-10;          // residual target ||m x - rho x||_inf
    std::size_t max_iter = 200000;
    double neg_tol = 1e-12;      // entries >= -neg_tol are accepted as nonnegative
};

/// Spectral-radius estimate and eigenvector of a nonnegative matrix, with
/// the residual actually achieved.
struct PerronPair {
    double rho = 0.0;
    Vector x;
    std::size_t iterations = 0;
    double residual = 0.0;
};

/// Power iteration for the spectral radius of a (entrywise) nonnegative
/// matrix. Runs on m + I so that the target eigenvalue strictly dominates in
/// modulus even for periodic or reducible inputs; the shift adds exactly 1 to
/// every eigenvalue and leaves eigenvectors unchanged.
///
/// Output is normalized to unit 2-norm with the first nonzero coordinate
/// positive, and satisfies ||m x - rho x||_inf <= cfg.tol on success.
inline PerronPair perron(const Matrix& m, const PerronConfig& cfg = {})
{
    require(m.square(), Errc::InvalidInput, "perron: matrix must be square");
    const std::size_t n = m.rows();
    require(n >= 1, Errc::InvalidInput, "perron: empty matrix");
    for (double v : m.data())
        require(v >= -cfg.neg_tol, Errc::NegativeEntries,
                "perron: matrix has negative entries");

    // Shifted iteration matrix; tiny negative inputs are clamped to zero.
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b(i, j) = std::max(m(i, j), 0.0) + (i == j ? 1.0 : 0.0);

    Vector x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double lambda = 0.0;
    double residual = 0.0;
    bool converged = false;
    std::size_t it = 0;
    for (; it < cfg.max_iter; ++it) {
        Vector z = b * x;
        lambda = dot(z, x); // Rayleigh-style estimate; x has unit norm
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            residual = std::max(residual, std::abs(z[i] - lambda * x[i]));
        if (residual <= 0.5 * cfg.tol) {
            converged = true; // keep the x the residual was measured at
            break;
        }
        const double zn = norm2(z);
        require(zn > 0.0, Errc::InternalError, "perron: iterate collapsed to zero");
        for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / zn;
    }
    if (!converged)
        raise(Errc::NoConvergence,
              "perron: residual " + std::to_string(residual) + " after " +
                  std::to_string(it) + " iterations");

    // Fix the sign so the first nonzero coordinate is positive.
    for (double v : x) {
        if (std::abs(v) > 1e-12) {
            if (v < 0.0)
                for (double& w : x) w = -w;
            break;
        }
    }

    PerronPair out;
    out.rho = lambda - 1.0;
    out.x = std::move(x);
    out.iterations = it;
    // Residual against the original (unshifted, unclamped) matrix.
    Vector mx = m * out.x;
    out.residual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        out.residual = std::max(out.residual, std::abs(mx[i] - out.rho * out.x[i]));
    require(out.residual <= cfg.tol, Errc::NoConvergence,
            "perron: final residual exceeds tolerance");
    return out;
}

} // namespace convexcert::numerics
