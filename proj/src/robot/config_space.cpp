#include "dexrecon/robot/config_space.hpp"

#include "dexrecon/error.hpp"

namespace dexrecon {

RobotConfig retract(const RobotConfig& q, const Eigen::VectorXd& delta) {
  const auto dof = static_cast<Eigen::Index>(q.joint_angles.size());
  if (delta.size() != 6 + dof) fail(ErrorCode::DimensionMismatch, "tangent vector has the wrong size");
  RobotConfig out;
  const Vec3 dt = delta.head<3>();
  const Vec3 w = delta.segment<3>(3);
  out.wrist = RigidTransform(quat_from_rotation_vector(w) * q.wrist.rotation(), q.wrist.translation() + dt);
  out.joint_angles = q.joint_angles;
  for (Eigen::Index k = 0; k < dof; ++k) out.joint_angles[k] += delta[6 + k];
  return out;
}

Eigen::VectorXd config_difference(const RobotConfig& a, const RobotConfig& b) {
  if (a.joint_angles.size() != b.joint_angles.size()) {
    fail(ErrorCode::DimensionMismatch, "configurations differ in joint count");
  }
  const auto dof = static_cast<Eigen::Index>(a.joint_angles.size());
  Eigen::VectorXd d(6 + dof);
  d.head<3>() = a.wrist.translation() - b.wrist.translation();
  d.segment<3>(3) = rotation_vector(a.wrist.rotation() * b.wrist.rotation().conjugate());
  for (Eigen::Index k = 0; k < dof; ++k) d[6 + k] = a.joint_angles[k] - b.joint_angles[k];
  return d;
}

Eigen::VectorXd joint_vector(const RobotConfig& q) {
  return Eigen::Map<const Eigen::VectorXd>(q.joint_angles.data(), static_cast<Eigen::Index>(q.joint_angles.size()));
}

}  // namespace dexrecon
