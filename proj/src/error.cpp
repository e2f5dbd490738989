#include "pcontact/error.hpp"

namespace pcontact {

std::string_view error_name(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotHerglotz: return "NotHerglotz";
        case ErrorKind::OutOfInterval: return "OutOfInterval";
        case ErrorKind::NoSignChange: return "NoSignChange";
        case ErrorKind::NotSimple: return "NotSimple";
        case ErrorKind::NotEigenvalue: return "NotEigenvalue";
        case ErrorKind::NotResolventPoint: return "NotResolventPoint";
        case ErrorKind::ZeroDenominator: return "ZeroDenominator";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonRealDeterminant: return "NonRealDeterminant";
        case ErrorKind::NewtonDiverged: return "NewtonDiverged";
        case ErrorKind::BracketLost: return "BracketLost";
        case ErrorKind::LeftInterval: return "LeftInterval";
        case ErrorKind::InsufficientSamples: return "InsufficientSamples";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<double> value)
    : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind), value_(value) {}

}  // namespace pcontact
