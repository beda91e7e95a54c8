// convexcert command-line front door: verdicts, reductions, certificates and
// Rankin checks over point-set JSON, plus instance generation and the
// self-verification suite.
//
// Exit codes: 0 verified success, 1 verified negative verdict, 2 input
// error, 3 numerical or ambiguity failure.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "convexcert/certificates.hpp"
#include "convexcert/generate.hpp"
#include "convexcert/geometry.hpp"
#include "convexcert/json_io.hpp"
#include "convexcert/rankin.hpp"
#include "convexcert/reduction.hpp"
#include "convexcert/selftest.hpp"

namespace {

using namespace convexcert;
using io::Json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
    std::string in_file;
    std::string out_file;
    double tol = -1.0; // <0 keeps the defaults
};

geometry::GeometryConfig geometry_config(const CommonOpts& opts)
{
    geometry::GeometryConfig cfg;
    if (opts.tol > 0.0) {
        cfg.membership_tol = opts.tol;
        cfg.interior_tol = opts.tol;
        cfg.separation_tol = opts.tol;
    }
    return cfg;
}

Json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) raise(Errc::InvalidInput, "cannot open input file: " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
}

PointSet load_points(const CommonOpts& opts)
{
    if (opts.in_file.empty()) raise(Errc::InvalidInput, "missing --in FILE");
    return io::point_set_from_json(read_json(opts.in_file));
}

void emit(const CommonOpts& opts, const Json& j)
{
    const std::string text = j.dump(2) + "\n";
    if (opts.out_file.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opts.out_file);
        if (!out) raise(Errc::InvalidInput, "cannot open output file: " + opts.out_file);
        out << text;
    }
}

int exit_code_for(const Error& e)
{
    switch (e.code()) {
        case Errc::InvalidInput:
        case Errc::NotSymmetric:
        case Errc::ModeViolated:
        case Errc::ZeroVector:
        case Errc::WitnessInvalid:
        case Errc::NotInteriorInput:
        case Errc::SeparatorInvalid:
            return kExitInput;
        default:
            return kExitNumerical;
    }
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_input = true)
{
    auto* in = cmd->add_option("--in", opts.in_file, "input JSON file");
    if (needs_input) in->required();
    cmd->add_option("--out", opts.out_file, "output JSON file (default: stdout)");
    cmd->add_option("--tol", opts.tol, "override the decision tolerance");
}

rankin::RankinMode parse_mode(const std::string& s)
{
    if (s == "obtuse") return rankin::RankinMode::Obtuse;
    if (s == "nonacute") return rankin::RankinMode::NonAcute;
    raise(Errc::InvalidInput, "mode must be obtuse or nonacute");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"convex membership, reduction and separation certificates"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOpts opts;
    std::uint64_t seed = 1;
    std::size_t dim = 2, count = 4;
    std::string kind_str = "origin-inside";
    std::string mode_str = "obtuse";
    bool faithful = false, fast = false;

    auto* c_member = app.add_subcommand("member", "is the origin in the convex hull?");
    add_common(c_member, opts);

    auto* c_interior = app.add_subcommand("interior", "is the origin interior to the hull?");
    add_common(c_interior, opts);

    auto* c_separate = app.add_subcommand("separate", "find a separating direction");
    add_common(c_separate, opts);
    bool strict_sep = false;
    c_separate->add_flag("--strict", strict_sep, "require a strict separator");

    auto* c_redc = app.add_subcommand("reduce-caratheodory",
                                      "shrink a membership witness to at most d+1 points");
    add_common(c_redc, opts);
    c_redc->add_flag("--faithful", faithful, "scan removable points (induction order)");
    c_redc->add_flag("--fast", fast, "pivot along affine dependences (default)");

    auto* c_reds = app.add_subcommand("reduce-steinitz",
                                      "shrink an interior instance to at most 2d points");
    add_common(c_reds, opts);

    auto* c_certc = app.add_subcommand("certify-caratheodory",
                                       "build the eigenvector non-membership certificate");
    add_common(c_certc, opts);

    auto* c_certs = app.add_subcommand("certify-steinitz",
                                       "build the eigenvector non-interiority certificate");
    add_common(c_certs, opts);

    auto* c_rankin = app.add_subcommand("rankin-check", "verify pairwise angle bounds");
    add_common(c_rankin, opts);
    c_rankin->add_option("--mode", mode_str, "obtuse|nonacute")->required();

    auto* c_witness = app.add_subcommand("rankin-witness",
                                         "realizability of a Gram matrix at dimension d");
    add_common(c_witness, opts);
    c_witness->add_option("--mode", mode_str, "obtuse|nonacute")->required();
    c_witness->add_option("--dim", dim, "target dimension")->required();

    auto* c_gen = app.add_subcommand("gen", "generate a verified instance");
    add_common(c_gen, opts, /*needs_input=*/false);
    c_gen->add_option("--dim", dim, "dimension")->required();
    c_gen->add_option("--n", count, "number of points")->required();
    c_gen->add_option("--kind", kind_str,
                      "origin-inside|origin-outside|origin-interior|origin-boundary|"
                      "rankin-obtuse|rankin-nonacute")
        ->required();
    c_gen->add_option("--seed", seed, "generator seed");

    auto* c_selftest = app.add_subcommand("selftest", "run the acceptance suite");
    c_selftest->add_option("--seed", seed, "suite seed");
    c_selftest->add_option("--out", opts.out_file, "output JSON file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        return kExitInput;
    }

    try {
        const auto cfg = geometry_config(opts);

        if (*c_member) {
            const auto ps = load_points(opts);
            const auto v = geometry::contains_origin(ps, cfg);
            emit(opts, io::to_json(v));
            if (v.status == geometry::Membership::Borderline) return kExitNumerical;
            return v.status == geometry::Membership::Inside ? kExitOk : kExitNegative;
        }

        if (*c_interior) {
            const auto ps = load_points(opts);
            const auto v = geometry::is_interior(ps, cfg);
            emit(opts, io::to_json(v));
            return v.status == geometry::Interiority::Interior ? kExitOk : kExitNegative;
        }

        if (*c_separate) {
            const auto ps = load_points(opts);
            if (strict_sep) {
                const auto v = geometry::contains_origin(ps, cfg);
                if (v.status == geometry::Membership::Borderline) {
                    emit(opts, io::to_json(v));
                    return kExitNumerical;
                }
                if (v.status == geometry::Membership::Inside) {
                    emit(opts, Json{{"separator", nullptr},
                                    {"reason", "origin lies in the hull"}});
                    return kExitNegative;
                }
                emit(opts, Json{{"separator", io::to_json(*v.outside)}});
                return kExitOk;
            }
            const auto sep = geometry::weak_separator(ps, cfg);
            if (!sep) {
                emit(opts, Json{{"separator", nullptr},
                                {"reason", "origin is interior to the hull"}});
                return kExitNegative;
            }
            emit(opts, Json{{"separator", io::to_json(*sep)}});
            return kExitOk;
        }

        if (*c_redc) {
            const auto ps = load_points(opts);
            const auto v = geometry::contains_origin(ps, cfg);
            if (v.status == geometry::Membership::Borderline) {
                emit(opts, io::to_json(v));
                return kExitNumerical;
            }
            if (v.status == geometry::Membership::Outside) {
                emit(opts, io::to_json(v));
                return kExitNegative;
            }
            const auto mode = faithful && !fast ? reduction::ReductionMode::Faithful
                                                : reduction::ReductionMode::Fast;
            const auto r = reduction::reduce_caratheodory(ps, *v.inside, mode, cfg);
            emit(opts, io::to_json(r));
            return kExitOk;
        }

        if (*c_reds) {
            const auto ps = load_points(opts);
            const auto v = geometry::is_interior(ps, cfg);
            if (v.status == geometry::Interiority::NotInterior) {
                emit(opts, io::to_json(v));
                return kExitNegative;
            }
            const auto r = reduction::reduce_steinitz(ps, cfg);
            emit(opts, io::to_json(r));
            return kExitOk;
        }

        if (*c_certc) {
            const auto ps = load_points(opts);
            if (geometry::contains_origin(ps, cfg).status != geometry::Membership::Outside) {
                emit(opts, Json{{"certificate", nullptr},
                                {"reason", "origin lies in the hull; nothing to certify"}});
                return kExitNegative;
            }
            const auto seps = certificates::leave_one_out_strict(ps, cfg);
            const auto cert = certificates::certify_nonmembership(ps, seps);
            const auto check = certificates::verify_certificate(ps, cert.separator);
            Json j = io::to_json(cert, "caratheodory");
            j["verified"] = check.pass;
            emit(opts, j);
            return check.pass ? kExitOk : kExitNumerical;
        }

        if (*c_certs) {
            const auto ps = load_points(opts);
            if (geometry::is_interior(ps, cfg).status == geometry::Interiority::Interior) {
                emit(opts, Json{{"certificate", nullptr},
                                {"reason", "origin is interior; nothing to certify"}});
                return kExitNegative;
            }
            const auto seps = certificates::leave_one_out_weak(ps, true, cfg);
            const auto cert = certificates::certify_noninterior(ps, seps);
            const geometry::SeparatorCertificate& sep =
                std::holds_alternative<certificates::PerronCertificate>(cert)
                    ? std::get<certificates::PerronCertificate>(cert).separator
                    : std::get<certificates::DirectCertificate>(cert).separator;
            const auto check = certificates::verify_certificate(ps, sep);
            Json j = io::to_json(cert);
            j["verified"] = check.pass;
            emit(opts, j);
            return check.pass ? kExitOk : kExitNumerical;
        }

        if (*c_rankin) {
            const auto ps = load_points(opts);
            const auto rep = rankin::check_angles(ps, parse_mode(mode_str));
            emit(opts, io::to_json(rep));
            return rep.predicate_holds && rep.within_bound ? kExitOk : kExitNegative;
        }

        if (*c_witness) {
            const auto g = io::matrix_from_json(read_json(opts.in_file));
            const auto rep = rankin::spectral_witness(g, dim, parse_mode(mode_str));
            emit(opts, io::to_json(rep));
            if (rep.verdict == rankin::Realizability::Indeterminate) return kExitNumerical;
            return rep.verdict == rankin::Realizability::Realizable ? kExitOk
                                                                    : kExitNegative;
        }

        if (*c_gen) {
            gen::InstanceSpec spec;
            spec.dim = dim;
            spec.n = count;
            spec.kind = gen::kind_from_string(kind_str);
            spec.seed = seed;
            const auto ps = gen::generate(spec, cfg);
            emit(opts, io::to_json(ps));
            return kExitOk;
        }

        if (*c_selftest) {
            const auto report = selftest::run_selftest(seed);
            for (const auto& c : report.criteria)
                std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << "criterion " << c.id
                          << ": " << c.name << "\n";
            if (opts.out_file.empty()) {
                std::cout << report.canonical << "\n";
            } else {
                std::ofstream out(opts.out_file);
                out << report.canonical << "\n";
            }
            return report.all_pass ? kExitOk : kExitNegative;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitInput;
}
