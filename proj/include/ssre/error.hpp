#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssre {

/// Failure categories raised by the library. Each maps to a CLI exit code
/// through `is_numerical`.
enum class ErrorKind {
    InvalidPredictive,
    ShapeError,
    InsufficientData,
    DegenerateVariance,
    SingularFit,
    FitDidNotConverge,
    NumericalError,
    InvalidEValue,
    InvalidRisk,
    InvalidTilt,
    NoRootError,
    IllConditioned,
    InvalidConfig,
    ParseError,
    OrderError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for failures that come from the numbers rather than the inputs'
/// shape or syntax (exit code 3 in the CLI).
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ssre
