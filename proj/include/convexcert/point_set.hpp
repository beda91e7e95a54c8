#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "convexcert/errors.hpp"
#include "convexcert/matrix.hpp"

namespace convexcert {

/// A dimension d and n points of R^d. The column view V = [v_1,...,v_n]
/// is available via point_matrix().
struct PointSet {
    std::size_t dim = 0;
    std::vector<numerics::Vector> points;

    PointSet() = default;

    PointSet(std::size_t d, std::vector<numerics::Vector> pts)
        : dim(d), points(std::move(pts))
    {
        require(dim >= 1, Errc::InvalidInput, "PointSet: dim must be >= 1");
        for (const auto& p : points) {
            require(p.size() == dim, Errc::InvalidInput,
                    "PointSet: point length does not match dim");
            for (double c : p)
                require(std::isfinite(c), Errc::InvalidInput,
                        "PointSet: coordinate not finite");
        }
    }

    std::size_t size() const noexcept { return points.size(); }
    const numerics::Vector& operator[](std::size_t i) const { return points[i]; }

    /// d-by-n matrix whose columns are the points.
    numerics::Matrix point_matrix() const
    {
        numerics::Matrix v(dim, points.size());
        for (std::size_t j = 0; j < points.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i) v(i, j) = points[j][i];
        return v;
    }

    PointSet subset(const std::vector<std::size_t>& indices) const
    {
        std::vector<numerics::Vector> pts;
        pts.reserve(indices.size());
        for (std::size_t i : indices) {
            require(i < points.size(), Errc::InvalidInput, "subset index out of range");
            pts.push_back(points[i]);
        }
        return PointSet(dim, std::move(pts));
    }

    /// All indices except `skip`, in ascending order.
    PointSet without(std::size_t skip) const
    {
        std::vector<numerics::Vector> pts;
        pts.reserve(points.size() - 1);
        for (std::size_t i = 0; i < points.size(); ++i)
            if (i != skip) pts.push_back(points[i]);
        return PointSet(dim, std::move(pts));
    }
};

/// Nonnegative weights over a support subset, summing to 1, witnessing that
/// the origin is a convex combination of the supported points.
struct ConvexCombination {
    std::vector<std::size_t> support; // ascending indices into the point set
    std::vector<double> weights;      // parallel to support, each > 0
};

/// Build a combination from a full weight vector, dropping zero entries.
inline ConvexCombination make_combination(const std::vector<double>& full_weights,
                                          double zero_tol = 0.0)
{
    ConvexCombination cc;
    for (std::size_t i = 0; i < full_weights.size(); ++i) {
        if (full_weights[i] > zero_tol) {
            cc.support.push_back(i);
            cc.weights.push_back(full_weights[i]);
        }
    }
    return cc;
}

inline double weight_sum(const ConvexCombination& cc)
{
    double s = 0.0;
    for (double w : cc.weights) s += w;
    return s;
}

/// || sum_i w_i v_i ||_2 recomputed from raw coordinates.
inline double combination_residual(const PointSet& ps, const ConvexCombination& cc)
{
    numerics::Vector acc(ps.dim, 0.0);
    for (std::size_t k = 0; k < cc.support.size(); ++k) {
        const auto& v = ps[cc.support[k]];
        for (std::size_t i = 0; i < ps.dim; ++i) acc[i] += cc.weights[k] * v[i];
    }
    return numerics::norm2(acc);
}

inline bool combination_verifies(const PointSet& ps, const ConvexCombination& cc,
                                 double residual_tol, double sum_tol = 1e-12)
{
    if (cc.support.size() != cc.weights.size() || cc.support.empty()) return false;
    for (std::size_t k = 0; k < cc.support.size(); ++k) {
        if (cc.support[k] >= ps.size()) return false;
        if (k > 0 && cc.support[k] <= cc.support[k - 1]) return false;
        if (!(cc.weights[k] > 0.0)) return false;
    }
    if (std::abs(weight_sum(cc) - 1.0) > sum_tol) return false;
    return combination_residual(ps, cc) <= residual_tol;
}

} // namespace convexcert
