#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gradshift {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NonHermitianInput,
  ConvergenceFailure,
  EmptyGapSet,
  ShiftSelectionFailure,
  SingularSystem,
  SingularShift,
  SingularShiftPair,
  SingularStencil,
  DegenerateStencil,
  InsufficientStencils,
  DimensionMismatch,
  InvalidPauliCharacter,
  InternalConsistency,
};

std::string_view to_string(ErrorCode code) noexcept;

// True for errors caused by malformed user input, as opposed to numerical
// breakdown of an otherwise well-formed request.
bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace gradshift
