#include "bncut/error.hpp"

namespace bncut {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::DanglingArc: return "DanglingArc";
    case ErrorCode::DuplicateArc: return "DuplicateArc";
    case ErrorCode::CptShapeMismatch: return "CptShapeMismatch";
    case ErrorCode::CptRowNotNormalized: return "CptRowNotNormalized";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::AlreadyInstantiated: return "AlreadyInstantiated";
    case ErrorCode::ZeroProbabilityEvidence: return "ZeroProbabilityEvidence";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NoEligibleCandidate: return "NoEligibleCandidate";
    case ErrorCode::InstantiationBudgetExceeded:
      return "InstantiationBudgetExceeded";
    case ErrorCode::ImpossibleEvidence: return "ImpossibleEvidence";
    case ErrorCode::InvalidCutset: return "InvalidCutset";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownNodeReference: return "UnknownNodeReference";
    case ErrorCode::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrorCode::Usage: return "Usage";
  }
  return "UnknownError";
}

}  // namespace bncut
