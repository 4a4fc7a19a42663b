#include "cavrad/error.hpp"

namespace cavrad {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NullSpaceDegenerate: return "NullSpaceDegenerate";
        case ErrorKind::SingularSolve: return "SingularSolve";
        case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
        case ErrorKind::CutoffLimitExceeded: return "CutoffLimitExceeded";
        case ErrorKind::VacuousCorrelation: return "VacuousCorrelation";
        case ErrorKind::ReferenceVacuous: return "ReferenceVacuous";
        case ErrorKind::EmptySweep: return "EmptySweep";
        case ErrorKind::UnknownKey: return "UnknownKey";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::MissingRequired: return "MissingRequired";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

}  // namespace cavrad
