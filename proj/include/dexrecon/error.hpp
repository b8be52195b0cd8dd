#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dexrecon {

enum class ErrorCode {
  InvalidArgument,
  EmptyMesh,
  EmptyTarget,
  MalformedXml,
  CyclicKinematics,
  MissingLink,
  NonUnitAxis,
  DimensionMismatch,
  MissingGeometry,
  NonPositiveRadius,
  DegenerateAnchors,
  RankDeficientFit,
  NoApproach,
  CollisionInRegeneration,
  RetryExhausted,
  MissingPose,
  UnmarkedTrajectory,
  ZeroVector,
  NoValidSamples,
  EmptyCandidates,
  NoVisiblePoints,
  IoMissing,
  IoFormat,
  UnknownSubcommand,
  Usage,
};

// Stable machine-readable name, e.g. "E_IO_MISSING".
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace dexrecon
