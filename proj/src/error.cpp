#include "iterseries/error.hpp"

namespace iterseries {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::NoViableCandidate: return "NoViableCandidate";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::MissingValidationSS: return "MissingValidationSS";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace iterseries
