#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace monolab {

enum class ErrorKind {
  GridMismatch,
  DimensionMismatch,
  GroupMismatch,
  CFLViolation,
  NonFiniteState,
  EmptyReturnSet,
  NoCrossing,
  NotStable,
  Undecided,
  SymmetryFlagMissing,
  BracketFailure,
  NoConvergence,
  HypothesisViolated,
  TrappingViolated,
  ConfigInvalid,
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. The kind is what callers branch on; the message is for humans.
class LabError : public std::runtime_error {
 public:
  LabError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace monolab
