#pragma once

#include <stdexcept>
#include <string>

namespace gsb {

// Every precondition violation in the library throws Error with one of
// these codes. Codes are stable API: callers (and the CLI) dispatch on
// them, so new codes append rather than reorder.
enum class ErrorCode {
  NonPositiveVariance,
  NonPositivePower,
  NonPositiveBandwidth,
  UnsortedNoise,
  IndexOutOfRange,
  LengthMismatch,
  OutOfRange,
  NotMonotone,
  DimensionMismatch,
  InvalidTau,
  NoSolution,
  DegenerateDenominator,
  InconsistentLabels,
  ModePreconditionFailed,
  InsufficientSamples,
  NegativeRate,
  ParseError,
  IoError,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::NonPositivePower: return "NonPositivePower";
    case ErrorCode::NonPositiveBandwidth: return "NonPositiveBandwidth";
    case ErrorCode::UnsortedNoise: return "UnsortedNoise";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidTau: return "InvalidTau";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::InconsistentLabels: return "InconsistentLabels";
    case ErrorCode::ModePreconditionFailed: return "ModePreconditionFailed";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace gsb
