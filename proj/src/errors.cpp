#include "tailgame/errors.hpp"

namespace tailgame {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::OverflowError: return "OverflowError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::PartitionMismatch: return "PartitionMismatch";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadCutpoints: return "BadCutpoints";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::RequiresCategorical: return "RequiresCategorical";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace tailgame
