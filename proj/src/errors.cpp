#include "fbplab/errors.hpp"

namespace fbp {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateKernel: return "DegenerateKernel";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::DegenerateDomain: return "DegenerateDomain";
    case ErrorCode::PositivityLoss: return "PositivityLoss";
    case ErrorCode::OutOfHorizon: return "OutOfHorizon";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::DomainTooSmall: return "DomainTooSmall";
    case ErrorCode::HorizonMismatch: return "HorizonMismatch";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<double> time_of_failure)
    : std::runtime_error(message), code_(code), time_(time_of_failure) {}

Error Error::at_time(double t) const {
    return Error(code_, what(), time_ ? time_ : std::optional<double>(t));
}

} // namespace fbp
