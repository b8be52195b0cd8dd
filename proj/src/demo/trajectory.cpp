#include "dexrecon/demo/trajectory.hpp"

#include "dexrecon/error.hpp"

namespace dexrecon {

void Trajectory::validate() const {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].config.joint_angles.size() != joint_names.size()) {
      fail(ErrorCode::DimensionMismatch, "frame " + std::to_string(i) + " has " +
                                             std::to_string(frames[i].config.joint_angles.size()) +
                                             " joint values, header names " + std::to_string(joint_names.size()));
    }
    if (i > 0 && !(frames[i].time > frames[i - 1].time)) {
      fail(ErrorCode::InvalidArgument, "timestamps must be strictly increasing (frame " + std::to_string(i) + ")");
    }
  }
  if (t1 && t2 && *t1 > *t2) fail(ErrorCode::InvalidArgument, "stage marks out of order: t1 > t2");
  if ((t1 && *t1 >= frames.size()) || (t2 && *t2 >= frames.size())) {
    fail(ErrorCode::InvalidArgument, "stage mark beyond the last frame");
  }
}

}  // namespace dexrecon
