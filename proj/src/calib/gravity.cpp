#include <cmath>
#include <numbers>

#include "dexrecon/calib/calib.hpp"
#include "dexrecon/error.hpp"

namespace dexrecon {

RigidTransform gravity_rotation(const Vec3& g_cam) {
  const double len = g_cam.norm();
  if (!(len > 1e-9)) fail(ErrorCode::ZeroVector, "gravity vector has (near) zero length");
  const Vec3 g = g_cam / len;
  const Vec3 down(0.0, 0.0, -1.0);
  const Vec3 axis = g.cross(down);
  const double s = axis.norm();
  const double c = g.dot(down);
  if (s < 1e-15) {
    if (c > 0.0) return RigidTransform::identity();
    return RigidTransform::from_axis_angle(Vec3::UnitX(), std::numbers::pi);
  }
  return RigidTransform::from_axis_angle(axis / s, std::atan2(s, c));
}

Trajectory align_trajectory(const Trajectory& traj, const RigidTransform& R) {
  Trajectory out = traj;
  for (auto& frame : out.frames) {
    frame.config.wrist = R * frame.config.wrist;
    for (auto& [id, pose] : frame.objects) pose = R * pose;
  }
  return out;
}

}  // namespace dexrecon
