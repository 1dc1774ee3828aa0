#pragma once

#include <stdexcept>
#include <string>

namespace eulerdd {

enum class ErrorCode {
  ShapeError,
  InvalidGenerator,
  GroupNotClosed,
  InvalidGroup,
  InvalidRepresentation,
  NotNormalSubgroup,
  PreconditionViolation,
  DegenerateDecomposition,
  NoEulerianCycle,
  UnreachableGenerator,
  ProfileMismatch,
  IncompleteProfiles,
  InvalidSchedule,
  IncompatibleFaultGrid,
  TimeOutOfRange,
  InvalidDrift,
  UnitarityDrift,
  ConfigError,
};

// All library failures are reported through this type; the code lets callers
// (notably the CLI) map failures onto exit statuses without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eulerdd
