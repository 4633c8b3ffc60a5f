#pragma once

#include <stdexcept>
#include <string>

namespace bncut {

enum class ErrorCode {
  CycleDetected,
  DuplicateName,
  DanglingArc,
  DuplicateArc,
  CptShapeMismatch,
  CptRowNotNormalized,
  UnknownNode,
  AlreadyInstantiated,
  ZeroProbabilityEvidence,
  NonConvergence,
  NoEligibleCandidate,
  InstantiationBudgetExceeded,
  ImpossibleEvidence,
  InvalidCutset,
  StateSpaceTooLarge,
  SyntaxError,
  UnknownNodeReference,
  DuplicateDeclaration,
  Usage,
};

/// Stable machine-parsable name, e.g. "CycleDetected".
const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace bncut
