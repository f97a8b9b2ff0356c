#include "reskit/error.hpp"

namespace reskit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DerivativeVanished: return "DerivativeVanished";
    case ErrorCode::BoundaryZero: return "BoundaryZero";
    case ErrorCode::NonIntegerWinding: return "NonIntegerWinding";
    case ErrorCode::SubdivisionLimit: return "SubdivisionLimit";
    case ErrorCode::NonFiniteSample: return "NonFiniteSample";
    case ErrorCode::TailNonConvergent: return "TailNonConvergent";
    case ErrorCode::InvalidQuantumNumbers: return "InvalidQuantumNumbers";
    case ErrorCode::ZeroMomentum: return "ZeroMomentum";
    case ErrorCode::SeedNonConvergence: return "SeedNonConvergence";
    case ErrorCode::CompletenessMismatch: return "CompletenessMismatch";
    case ErrorCode::BranchDegenerate: return "BranchDegenerate";
    case ErrorCode::WrongHalfPlane: return "WrongHalfPlane";
    case ErrorCode::NonPositiveWidth: return "NonPositiveWidth";
    case ErrorCode::NonPositiveEnergy: return "NonPositiveEnergy";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::EmptySuperposition: return "EmptySuperposition";
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

bool is_usage_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidQuantumNumbers:
    case ErrorCode::InvalidGrid:
    case ErrorCode::EmptySuperposition:
    case ErrorCode::NonPositiveEnergy:
    case ErrorCode::NonPositiveWidth:
    case ErrorCode::ZeroMomentum:
      return true;
    default:
      return false;
  }
}

}  // namespace reskit
