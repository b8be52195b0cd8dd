#include "dexrecon/geom/transform.hpp"

#include <cmath>

namespace dexrecon {

namespace {

// Leaves quaternions that are already unit to the last few ulps untouched, so
// that read -> construct -> write is bit-stable.
Quat normalized(const Quat& q) {
  const double n2 = q.squaredNorm();
  if (std::abs(n2 - 1.0) <= 4e-16) return q;
  const double n = std::sqrt(n2);
  return Quat(q.w() / n, q.x() / n, q.y() / n, q.z() / n);
}

}  // namespace

Quat quat_from_rotation_vector(const Vec3& v) {
  const double angle = v.norm();
  if (angle < 1e-12) {
    // Second-order expansion keeps the map smooth through zero.
    const Quat q(1.0 - angle * angle / 8.0, 0.5 * v.x(), 0.5 * v.y(), 0.5 * v.z());
    return normalized(q);
  }
  const double s = std::sin(0.5 * angle) / angle;
  return Quat(std::cos(0.5 * angle), s * v.x(), s * v.y(), s * v.z());
}

Vec3 rotation_vector(const Quat& q_in) {
  Quat q = q_in;
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const Vec3 v(q.x(), q.y(), q.z());
  const double s = v.norm();
  if (s < 1e-12) return 2.0 * v / q.w();
  const double angle = 2.0 * std::atan2(s, q.w());
  return v * (angle / s);
}

RigidTransform::RigidTransform(const Quat& rotation, const Vec3& translation)
    : rotation_(normalized(rotation)), translation_(translation) {}

RigidTransform RigidTransform::from_translation(const Vec3& t) {
  return RigidTransform(Quat::Identity(), t);
}

RigidTransform RigidTransform::from_axis_angle(const Vec3& axis, double angle,
                                               const Vec3& translation) {
  return RigidTransform(Quat(Eigen::AngleAxisd(angle, axis.normalized())), translation);
}

RigidTransform RigidTransform::from_rotation_vector(const Vec3& v, const Vec3& translation) {
  return RigidTransform(quat_from_rotation_vector(v), translation);
}

RigidTransform RigidTransform::from_matrix(const Mat3& rotation, const Vec3& translation) {
  return RigidTransform(Quat(rotation), translation);
}

RigidTransform RigidTransform::from_rpy(const Vec3& rpy, const Vec3& translation) {
  const Quat q = Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) *
                 Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
                 Eigen::AngleAxisd(rpy.x(), Vec3::UnitX());
  return RigidTransform(q, translation);
}

RigidTransform RigidTransform::inverse() const {
  const Quat inv = rotation_.conjugate();
  return RigidTransform(inv, -(inv * translation_));
}

bool RigidTransform::is_identity() const {
  return rotation_.w() == 1.0 && rotation_.x() == 0.0 && rotation_.y() == 0.0 &&
         rotation_.z() == 0.0 && translation_.isZero(0.0);
}

RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return RigidTransform(a.rotation_ * b.rotation_, a.rotation_ * b.translation_ + a.translation_);
}

double translation_distance(const RigidTransform& a, const RigidTransform& b) {
  return (a.translation() - b.translation()).norm();
}

double rotation_angle_between(const RigidTransform& a, const RigidTransform& b) {
  return a.rotation().angularDistance(b.rotation());
}

Quat slerp(const Quat& a, const Quat& b, double u) {
  return normalized(a.slerp(u, b));
}

}  // namespace dexrecon
