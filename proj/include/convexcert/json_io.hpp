#pragma once

#include <string>

#include <json.hpp>

#include "convexcert/certificates.hpp"
#include "convexcert/errors.hpp"
#include "convexcert/geometry.hpp"
#include "convexcert/matrix.hpp"
#include "convexcert/point_set.hpp"
#include "convexcert/rankin.hpp"
#include "convexcert/reduction.hpp"

namespace convexcert::io {

// ordered_json keeps key order stable, which makes serialized output
// byte-reproducible for identical inputs.
using Json = nlohmann::ordered_json;

inline Json to_json(const numerics::Matrix& m)
{
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

inline numerics::Matrix matrix_from_json(const Json& j)
{
    try {
        const auto rows = j.at("rows").get<std::size_t>();
        const auto cols = j.at("cols").get<std::size_t>();
        auto data = j.at("data").get<std::vector<double>>();
        return numerics::Matrix(rows, cols, std::move(data));
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::InvalidInput, std::string("matrix JSON: ") + e.what());
    }
}

inline Json to_json(const PointSet& ps)
{
    return Json{{"dim", ps.dim}, {"points", ps.points}};
}

inline PointSet point_set_from_json(const Json& j)
{
    try {
        const auto dim = j.at("dim").get<std::size_t>();
        auto points = j.at("points").get<std::vector<numerics::Vector>>();
        return PointSet(dim, std::move(points));
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::InvalidInput, std::string("point set JSON: ") + e.what());
    }
}

inline const char* to_string(geometry::SepMode m)
{
    return m == geometry::SepMode::Strict ? "strict" : "weak";
}

inline const char* to_string(geometry::Provenance p)
{
    return p == geometry::Provenance::Direct ? "direct" : "perron";
}

inline Json to_json(const geometry::SeparatorCertificate& c)
{
    return Json{{"y", c.y},
                {"mode", to_string(c.mode)},
                {"margin", c.margin},
                {"provenance", to_string(c.provenance)}};
}

inline Json to_json(const ConvexCombination& cc)
{
    return Json{{"support", cc.support}, {"weights", cc.weights}};
}

inline Json to_json(const geometry::MembershipVerdict& v)
{
    Json j;
    switch (v.status) {
        case geometry::Membership::Inside: j["verdict"] = "inside"; break;
        case geometry::Membership::Outside: j["verdict"] = "outside"; break;
        case geometry::Membership::Borderline: j["verdict"] = "borderline"; break;
    }
    j["min_norm"] = v.min_norm_value;
    if (v.inside) {
        j["support"] = v.inside->support;
        j["weights"] = v.inside->weights;
    }
    if (v.outside) j["separator"] = to_json(*v.outside);
    return j;
}

inline Json to_json(const geometry::InteriorVerdict& v)
{
    Json j;
    j["verdict"] = v.status == geometry::Interiority::Interior ? "interior" : "not_interior";
    j["delta_star"] = v.delta_star;
    j["affine_rank"] = v.affine_rank;
    if (v.witness) {
        j["support"] = v.witness->support;
        j["weights"] = v.witness->weights;
    }
    if (v.separator) j["separator"] = to_json(*v.separator);
    return j;
}

inline Json to_json(const reduction::ReductionResult& r)
{
    return Json{{"support", r.support},
                {"weights", r.witness.weights},
                {"trace", r.removal_trace},
                {"bound", r.bound}};
}

inline Json to_json(const certificates::PerronCertificate& c, const char* kind)
{
    return Json{{"kind", kind},
                {"branch", "perron"},
                {"lambda", c.lambda},
                {"rho", c.perron.rho},
                {"x", c.perron.x},
                {"y_star", c.separator.y},
                {"H", to_json(c.h)},
                {"margin", c.separator.margin}};
}

inline Json to_json(const certificates::DirectCertificate& c)
{
    return Json{{"kind", "steinitz"},
                {"branch", "direct"},
                {"index", c.index},
                {"y_star", c.separator.y},
                {"margin", c.separator.margin}};
}

inline Json to_json(const certificates::NoninteriorCertificate& c)
{
    if (std::holds_alternative<certificates::PerronCertificate>(c))
        return to_json(std::get<certificates::PerronCertificate>(c), "steinitz");
    return to_json(std::get<certificates::DirectCertificate>(c));
}

inline Json to_json(const certificates::VerificationReport& r)
{
    return Json{{"pass", r.pass},
                {"margin", r.margin},
                {"norm_y", r.norm_y},
                {"mode", to_string(r.mode)}};
}

inline Json to_json(const numerics::SpectralReport& r)
{
    return Json{{"eigenvalues", r.eigenvalues},
                {"clusters", r.clusters},
                {"psd", r.psd},
                {"numerical_rank", r.numerical_rank}};
}

inline const char* to_string(rankin::RankinMode m)
{
    return m == rankin::RankinMode::Obtuse ? "obtuse" : "nonacute";
}

inline Json to_json(const rankin::AngleCheckReport& r)
{
    Json j{{"mode", to_string(r.mode)},
           {"n", r.n},
           {"dim", r.dim},
           {"predicate_holds", r.predicate_holds},
           {"max_pair_dot", r.max_pair_dot},
           {"bound", r.bound},
           {"within_bound", r.within_bound},
           {"normalized", r.normalized}};
    if (r.spectral_witness) j["spectral_witness"] = to_json(*r.spectral_witness);
    return j;
}

inline Json to_json(const rankin::WitnessReport& r)
{
    const char* verdict = r.verdict == rankin::Realizability::Realizable ? "realizable"
                          : r.verdict == rankin::Realizability::Unrealizable
                              ? "unrealizable"
                              : "indeterminate";
    return Json{{"verdict", verdict},
                {"mode", to_string(r.mode)},
                {"n", r.n},
                {"dim", r.dim},
                {"bound", r.bound},
                {"within_bound", r.within_bound},
                {"lambda_shift", r.lambda_shift},
                {"top_multiplicity", r.top_multiplicity},
                {"trace_h", r.trace_h},
                {"spectrum", to_json(r.spectrum)}};
}

} // namespace convexcert::io
