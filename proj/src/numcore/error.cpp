#include "esr/numcore/error.hpp"

namespace esr {

ErrorCategory category_of(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::ValidationError:
        case ErrorCode::MissingField:
        case ErrorCode::OutOfRange:
            return ErrorCategory::Configuration;
        case ErrorCode::InvariantViolation:
            return ErrorCategory::Verification;
        default:
            return ErrorCategory::Numerical;
    }
}

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::MissingField: return "MissingField";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::FullRank: return "FullRank";
        case ErrorCode::RankDeficiencyTooHigh: return "RankDeficiencyTooHigh";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::StepUnderflow: return "StepUnderflow";
        case ErrorCode::ZeroTotalFlow: return "ZeroTotalFlow";
        case ErrorCode::InadmissibleState: return "InadmissibleState";
        case ErrorCode::NoNullVector: return "NoNullVector";
        case ErrorCode::SingularCharMatrix: return "SingularCharMatrix";
        case ErrorCode::NegativeVelocity: return "NegativeVelocity";
        case ErrorCode::CflViolation: return "CflViolation";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

}  // namespace esr
