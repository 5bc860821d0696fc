#include "gradshift/error.hpp"

namespace gradshift {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::InvalidArgument:
    return "InvalidArgument";
  case ErrorCode::ParseError:
    return "ParseError";
  case ErrorCode::NonHermitianInput:
    return "NonHermitianInput";
  case ErrorCode::ConvergenceFailure:
    return "ConvergenceFailure";
  case ErrorCode::EmptyGapSet:
    return "EmptyGapSet";
  case ErrorCode::ShiftSelectionFailure:
    return "ShiftSelectionFailure";
  case ErrorCode::SingularSystem:
    return "SingularSystem";
  case ErrorCode::SingularShift:
    return "SingularShift";
  case ErrorCode::SingularShiftPair:
    return "SingularShiftPair";
  case ErrorCode::SingularStencil:
    return "SingularStencil";
  case ErrorCode::DegenerateStencil:
    return "DegenerateStencil";
  case ErrorCode::InsufficientStencils:
    return "InsufficientStencils";
  case ErrorCode::DimensionMismatch:
    return "DimensionMismatch";
  case ErrorCode::InvalidPauliCharacter:
    return "InvalidPauliCharacter";
  case ErrorCode::InternalConsistency:
    return "InternalConsistency";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::InvalidArgument:
  case ErrorCode::ParseError:
  case ErrorCode::NonHermitianInput:
  case ErrorCode::InsufficientStencils:
  case ErrorCode::DimensionMismatch:
  case ErrorCode::InvalidPauliCharacter:
    return true;
  default:
    return false;
  }
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

} // namespace gradshift
