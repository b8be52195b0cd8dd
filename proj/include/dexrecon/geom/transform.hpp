#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace dexrecon {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

// Rotation vector (axis * angle) <-> unit quaternion. The log map returns the
// shortest rotation, |angle| <= pi.
Quat quat_from_rotation_vector(const Vec3& v);
Vec3 rotation_vector(const Quat& q);

/// Proper rigid motion p -> R p + t, with R stored as a unit quaternion.
///
/// Quaternions are renormalized on construction and after every composition so
/// long chains of compositions (trajectory integration, FK over deep trees)
/// stay on the manifold.
class RigidTransform {
 public:
  RigidTransform() : rotation_(Quat::Identity()), translation_(Vec3::Zero()) {}
  RigidTransform(const Quat& rotation, const Vec3& translation);

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3& t);
  static RigidTransform from_axis_angle(const Vec3& axis, double angle,
                                        const Vec3& translation = Vec3::Zero());
  static RigidTransform from_rotation_vector(const Vec3& v,
                                             const Vec3& translation = Vec3::Zero());
  static RigidTransform from_matrix(const Mat3& rotation, const Vec3& translation);
  // URDF-style fixed-axis roll/pitch/yaw: R = Rz(yaw) Ry(pitch) Rx(roll).
  static RigidTransform from_rpy(const Vec3& rpy, const Vec3& translation);

  const Quat& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  Mat3 rotation_matrix() const { return rotation_.toRotationMatrix(); }

  Vec3 apply(const Vec3& p) const { return rotation_ * p + translation_; }
  Vec3 rotate(const Vec3& v) const { return rotation_ * v; }

  RigidTransform inverse() const;

  // Exact identity test (no tolerance).
  bool is_identity() const;

  friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b);

 private:
  Quat rotation_;
  Vec3 translation_;
};

inline RigidTransform compose(const RigidTransform& a, const RigidTransform& b) { return a * b; }

// Translation gap and rotation angle between two transforms.
double translation_distance(const RigidTransform& a, const RigidTransform& b);
double rotation_angle_between(const RigidTransform& a, const RigidTransform& b);

Quat slerp(const Quat& a, const Quat& b, double u);

}  // namespace dexrecon
