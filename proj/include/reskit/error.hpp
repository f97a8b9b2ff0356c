#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reskit {

enum class ErrorCode {
  InvalidArgument,
  NonConvergence,
  DerivativeVanished,
  BoundaryZero,
  NonIntegerWinding,
  SubdivisionLimit,
  NonFiniteSample,
  TailNonConvergent,
  InvalidQuantumNumbers,
  ZeroMomentum,
  SeedNonConvergence,
  CompletenessMismatch,
  BranchDegenerate,
  WrongHalfPlane,
  NonPositiveWidth,
  NonPositiveEnergy,
  InvalidGrid,
  EmptySuperposition,
  ZeroTotal,
  IoFailure,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Usage-level errors (bad inputs) as opposed to numerical failures.
bool is_usage_error(ErrorCode code) noexcept;

}  // namespace reskit
