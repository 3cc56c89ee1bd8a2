#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace esr {

enum class ErrorCode {
    // configuration
    ParseError,
    ValidationError,
    MissingField,
    OutOfRange,
    // numerical
    SingularMatrix,
    FullRank,
    RankDeficiencyTooHigh,
    NonFiniteState,
    StepUnderflow,
    ZeroTotalFlow,
    InadmissibleState,
    NoNullVector,
    SingularCharMatrix,
    NegativeVelocity,
    CflViolation,
    // verification
    InvariantViolation,
};

enum class ErrorCategory { Configuration, Numerical, Verification };

[[nodiscard]] ErrorCategory category_of(ErrorCode code) noexcept;
[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure the library reports. The code decides the CLI exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] ErrorCategory category() const noexcept { return category_of(code_); }
    /// Message without the code prefix carried by what().
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace esr
