#include "dexrecon/error.hpp"

namespace dexrecon {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "E_INVALID_ARGUMENT";
    case ErrorCode::EmptyMesh: return "E_EMPTY_MESH";
    case ErrorCode::EmptyTarget: return "E_EMPTY_TARGET";
    case ErrorCode::MalformedXml: return "E_MALFORMED_XML";
    case ErrorCode::CyclicKinematics: return "E_CYCLIC_KINEMATICS";
    case ErrorCode::MissingLink: return "E_MISSING_LINK";
    case ErrorCode::NonUnitAxis: return "E_NON_UNIT_AXIS";
    case ErrorCode::DimensionMismatch: return "E_DIMENSION_MISMATCH";
    case ErrorCode::MissingGeometry: return "E_MISSING_GEOMETRY";
    case ErrorCode::NonPositiveRadius: return "E_NON_POSITIVE_RADIUS";
    case ErrorCode::DegenerateAnchors: return "E_DEGENERATE_ANCHORS";
    case ErrorCode::RankDeficientFit: return "E_RANK_DEFICIENT_FIT";
    case ErrorCode::NoApproach: return "E_NO_APPROACH";
    case ErrorCode::CollisionInRegeneration: return "E_COLLISION_IN_REGENERATION";
    case ErrorCode::RetryExhausted: return "E_RETRY_EXHAUSTED";
    case ErrorCode::MissingPose: return "E_MISSING_POSE";
    case ErrorCode::UnmarkedTrajectory: return "E_UNMARKED_TRAJECTORY";
    case ErrorCode::ZeroVector: return "E_ZERO_VECTOR";
    case ErrorCode::NoValidSamples: return "E_NO_VALID_SAMPLES";
    case ErrorCode::EmptyCandidates: return "E_EMPTY_CANDIDATES";
    case ErrorCode::NoVisiblePoints: return "E_NO_VISIBLE_POINTS";
    case ErrorCode::IoMissing: return "E_IO_MISSING";
    case ErrorCode::IoFormat: return "E_IO_FORMAT";
    case ErrorCode::UnknownSubcommand: return "E_UNKNOWN_SUBCOMMAND";
    case ErrorCode::Usage: return "E_USAGE";
  }
  return "E_UNKNOWN";
}

}  // namespace dexrecon
