#pragma once

#include <stdexcept>
#include <string>

namespace convexcert {

enum class Errc {
    InvalidInput,
    NotSymmetric,
    NoConvergence,
    NegativeEntries,
    SolverFailure,
    WitnessInvalid,
    NotInteriorInput,
    SeparatorInvalid,
    NonPositiveH,
    CertificateFailed,
    RhoNotAboveOne,
    ZeroSeparator,
    ZeroVector,
    ModeViolated,
    RankAmbiguous,
    GenerationFailed,
    InternalError,
};

inline const char* errc_name(Errc c)
{
    switch (c) {
        case Errc::InvalidInput: return "InvalidInput";
        case Errc::NotSymmetric: return "NotSymmetric";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::NegativeEntries: return "NegativeEntries";
        case Errc::SolverFailure: return "SolverFailure";
        case Errc::WitnessInvalid: return "WitnessInvalid";
        case Errc::NotInteriorInput: return "NotInteriorInput";
        case Errc::SeparatorInvalid: return "SeparatorInvalid";
        case Errc::NonPositiveH: return "NonPositiveH";
        case Errc::CertificateFailed: return "CertificateFailed";
        case Errc::RhoNotAboveOne: return "RhoNotAboveOne";
        case Errc::ZeroSeparator: return "ZeroSeparator";
        case Errc::ZeroVector: return "ZeroVector";
        case Errc::ModeViolated: return "ModeViolated";
        case Errc::RankAmbiguous: return "RankAmbiguous";
        case Errc::GenerationFailed: return "GenerationFailed";
        case Errc::InternalError: return "InternalError";
    }
    return "Unknown";
}

/// Library-wide exception carrying a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what)
{
    throw Error(code, what);
}

inline void require(bool cond, Errc code, const std::string& what)
{
    if (!cond) raise(code, what);
}

} // namespace convexcert
