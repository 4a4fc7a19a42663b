#pragma once

#include <stdexcept>
#include <string>

namespace cavrad {

enum class ErrorKind {
    DimensionMismatch,
    IndexOutOfRange,
    InvalidArgument,
    NullSpaceDegenerate,
    SingularSolve,
    StepSizeUnderflow,
    CutoffLimitExceeded,
    VacuousCorrelation,
    ReferenceVacuous,
    EmptySweep,
    UnknownKey,
    OutOfRange,
    MissingRequired,
    ParseError,
    GridMismatch,
    IoFailure,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace cavrad
