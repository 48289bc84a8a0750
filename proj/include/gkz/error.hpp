#pragma once

#include <stdexcept>
#include <string>

namespace gkz {

enum class ErrorCode {
  DimensionMismatch,
  NotFullDimensional,
  ShapeError,
  NotFullRank,
  LatticeNotSpanned,
  IntegralBeta,
  HypothesisFailed,
  DegenerateConfiguration,
  UnsupportedDimension,
  ConstantBlock,
  TooFewPunctures,
  TrivialLocalSystem,
  GIsZero,
  NotInImage,
  MissingGradient,
  DegenerateCoefficients,
  RootFindingDiverged,
  BranchJump,
  CycleNotClosed,
  InsufficientCycles,
  NonGenericPoint,
  ParseError,
  ValidationError,
};

const char* error_name(ErrorCode code) noexcept;

// Numeric failures map to CLI exit code 3; everything else is a validation
// failure (exit code 2).
bool is_numeric_failure(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gkz
