#include "ssre/error.hpp"

namespace ssre {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidPredictive: return "InvalidPredictive";
        case ErrorKind::ShapeError: return "ShapeError";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::DegenerateVariance: return "DegenerateVariance";
        case ErrorKind::SingularFit: return "SingularFit";
        case ErrorKind::FitDidNotConverge: return "FitDidNotConverge";
        case ErrorKind::NumericalError: return "NumericalError";
        case ErrorKind::InvalidEValue: return "InvalidEValue";
        case ErrorKind::InvalidRisk: return "InvalidRisk";
        case ErrorKind::InvalidTilt: return "InvalidTilt";
        case ErrorKind::NoRootError: return "NoRootError";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::OrderError: return "OrderError";
    }
    return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DegenerateVariance:
        case ErrorKind::SingularFit:
        case ErrorKind::FitDidNotConverge:
        case ErrorKind::NumericalError:
        case ErrorKind::NoRootError:
        case ErrorKind::IllConditioned:
            return true;
        default:
            return false;
    }
}

}  // namespace ssre
