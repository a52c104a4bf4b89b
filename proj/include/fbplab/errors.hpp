#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fbp {

enum class ErrorCode {
    InvalidArgument,
    DegenerateKernel,
    NegativeDensity,
    DegenerateDomain,
    PositivityLoss,
    OutOfHorizon,
    ResolutionTooCoarse,
    DomainTooSmall,
    HorizonMismatch,
    DegenerateFit,
    StepTooLarge,
    InvalidConfig,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library. Solver failures carry the
/// simulation time at which they happened.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<double> time_of_failure = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<double> time_of_failure() const noexcept { return time_; }

    /// Same error with the failing time attached (keeps an existing time).
    Error at_time(double t) const;

private:
    ErrorCode code_;
    std::optional<double> time_;
};

} // namespace fbp
