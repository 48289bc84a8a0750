#include "gkz/error.hpp"

namespace gkz {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotFullDimensional: return "NotFullDimensional";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::NotFullRank: return "NotFullRank";
    case ErrorCode::LatticeNotSpanned: return "LatticeNotSpanned";
    case ErrorCode::IntegralBeta: return "IntegralBeta";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::ConstantBlock: return "ConstantBlock";
    case ErrorCode::TooFewPunctures: return "TooFewPunctures";
    case ErrorCode::TrivialLocalSystem: return "TrivialLocalSystem";
    case ErrorCode::GIsZero: return "GIsZero";
    case ErrorCode::NotInImage: return "NotInImage";
    case ErrorCode::MissingGradient: return "MissingGradient";
    case ErrorCode::DegenerateCoefficients: return "DegenerateCoefficients";
    case ErrorCode::RootFindingDiverged: return "RootFindingDiverged";
    case ErrorCode::BranchJump: return "BranchJump";
    case ErrorCode::CycleNotClosed: return "CycleNotClosed";
    case ErrorCode::InsufficientCycles: return "InsufficientCycles";
    case ErrorCode::NonGenericPoint: return "NonGenericPoint";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

bool is_numeric_failure(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RootFindingDiverged:
    case ErrorCode::BranchJump:
    case ErrorCode::InsufficientCycles:
    case ErrorCode::NonGenericPoint:
      return true;
    default:
      return false;
  }
}

}  // namespace gkz
