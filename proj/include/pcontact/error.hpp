#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pcontact {

enum class ErrorKind {
    SingularMatrix,
    NotHermitian,
    NotHerglotz,
    OutOfInterval,
    NoSignChange,
    NotSimple,
    NotEigenvalue,
    NotResolventPoint,
    ZeroDenominator,
    DimensionMismatch,
    NonRealDeterminant,
    NewtonDiverged,
    BracketLost,
    LeftInterval,
    InsufficientSamples,
    InvalidArgument,
    ConfigError,
};

std::string_view error_name(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind; callers dispatch on it
/// (the CLI maps kinds to exit codes).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<double> value = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }

    /// Numeric payload, e.g. the last Newton iterate for NewtonDiverged.
    std::optional<double> value() const noexcept { return value_; }

private:
    ErrorKind kind_;
    std::optional<double> value_;
};

}  // namespace pcontact
