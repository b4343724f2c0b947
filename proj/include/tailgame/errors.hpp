#pragma once

#include <stdexcept>
#include <string>

namespace tailgame {

enum class ErrorCode {
  InvalidInput,
  PreconditionViolation,
  RangeError,
  OverflowError,
  EmptyInput,
  DegenerateData,
  DegreeTooLarge,
  ZeroMass,
  NoConvergence,
  SupportMismatch,
  PartitionMismatch,
  NotComparable,
  DimensionMismatch,
  BadCutpoints,
  NumericalFailure,
  Infeasible,
  RequiresCategorical,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the C
// API maps them onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace tailgame
