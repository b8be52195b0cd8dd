#include <cmath>
#include <limits>

#include "dexrecon/demo/demo.hpp"
#include "dexrecon/error.hpp"
#include "dexrecon/geom/mesh_distance.hpp"
#include "dexrecon/geom/random.hpp"

namespace dexrecon {

void SynthesisSpec::validate() const {
  if (count < 1) fail(ErrorCode::InvalidArgument, "synthesis count must be >= 1");
  if (!(x_min <= x_max) || !(y_min <= y_max) || !(yaw_min <= yaw_max)) {
    fail(ErrorCode::InvalidArgument, "synthesis bounds must be ordered (min <= max)");
  }
  if (target_object.empty()) fail(ErrorCode::InvalidArgument, "synthesis needs a target object id");
  if (method != "interpolate") fail(ErrorCode::InvalidArgument, "unknown motion regeneration method '" + method + "'");
  if (!(d_approach > 0.0) || !(clearance >= 0.0) || max_retries < 0) {
    fail(ErrorCode::InvalidArgument, "invalid synthesis thresholds");
  }
}

std::pair<std::size_t, std::size_t> skill_segment(const Trajectory& traj, const std::string& object_id,
                                                  const TriMesh& object, const RobotModel& model, double range) {
  const MeshDistance surface(object);
  std::optional<std::size_t> first;
  std::size_t last = 0;
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const auto it = traj.frames[t].objects.find(object_id);
    if (it == traj.frames[t].objects.end()) fail(ErrorCode::MissingPose, "target object missing in frame " + std::to_string(t));
    const RigidTransform to_object = it->second.inverse();
    bool near = false;
    for (const Vec3& v : robot_vertices_at(model, traj.frames[t].config)) {
      if (surface.distance(to_object.apply(v)) < range) {
        near = true;
        break;
      }
    }
    if (near) {
      if (!first) first = t;
      last = t;
    }
  }
  if (!first) fail(ErrorCode::NoApproach, "the hand never enters the interaction range of the target object");
  return {*first, last};
}

RigidTransform sample_scene_transform(const SynthesisSpec& spec, const Vec3& pivot, std::uint64_t seed, int attempt) {
  if (spec.identity) return RigidTransform::identity();
  Rng rng(seed);
  // Each attempt consumes a fixed number of draws so attempt k is reproducible.
  for (int i = 0; i < attempt * 6; ++i) rng.next();
  const double x = rng.uniform(spec.x_min, spec.x_max);
  const double y = rng.uniform(spec.y_min, spec.y_max);
  Quat R;
  if (spec.full_rotation) {
    // Shoemake's uniform quaternion.
    const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    const double tau = 2.0 * std::numbers::pi;
    R = Quat(b * std::cos(tau * u3), a * std::sin(tau * u2), a * std::cos(tau * u2), b * std::sin(tau * u3));
  } else {
    R = Quat(Eigen::AngleAxisd(rng.uniform(spec.yaw_min, spec.yaw_max), Vec3::UnitZ()));
  }
  const RigidTransform rotate_about_pivot(R, pivot - R * pivot);
  return RigidTransform::from_translation(Vec3(x, y, 0.0)) * rotate_about_pivot;
}

namespace {

RobotConfig interpolate(const RobotConfig& a, const RobotConfig& b, double u) {
  RobotConfig out;
  out.wrist = RigidTransform(slerp(a.wrist.rotation(), b.wrist.rotation(), u),
                             (1.0 - u) * a.wrist.translation() + u * b.wrist.translation());
  out.joint_angles.resize(a.joint_angles.size());
  for (std::size_t k = 0; k < a.joint_angles.size(); ++k) {
    out.joint_angles[k] = (1.0 - u) * a.joint_angles[k] + u * b.joint_angles[k];
  }
  return out;
}

}  // namespace

Trajectory transform_demo(const Trajectory& source, const std::string& target, std::size_t first, std::size_t last,
                          const RigidTransform& T) {
  if (T.is_identity()) return source;
  if (first > last || last >= source.size()) fail(ErrorCode::InvalidArgument, "skill segment out of range");
  Trajectory out = source;
  for (auto& frame : out.frames) {
    const auto it = frame.objects.find(target);
    if (it == frame.objects.end()) fail(ErrorCode::MissingPose, "target object missing from a frame");
    it->second = T * it->second;
  }
  for (std::size_t t = first; t <= last; ++t) out.frames[t].config.wrist = T * source.frames[t].config.wrist;

  const RobotConfig& entry = out.frames[first].config;
  for (std::size_t t = 0; t < first; ++t) {
    out.frames[t].config = interpolate(source.frames[0].config, entry, static_cast<double>(t) / first);
  }
  const std::size_t end = source.size() - 1;
  const RobotConfig exit = out.frames[last].config;
  for (std::size_t t = last + 1; t <= end; ++t) {
    out.frames[t].config = interpolate(exit, source.frames[end].config,
                                       static_cast<double>(t - last) / static_cast<double>(end - last));
  }
  return out;
}

SynthesisResult synthesize(const Trajectory& source, const SynthesisSpec& spec, const SceneMeshes& scene,
                           const RobotModel& model) {
  spec.validate();
  source.validate();
  if (!source.marked()) fail(ErrorCode::UnmarkedTrajectory, "synthesis needs a stage-marked source trajectory");
  if (source.joint_names.size() != model.dof()) {
    fail(ErrorCode::DimensionMismatch, "trajectory joint count differs from the robot model");
  }
  SynthesisResult result;
  if (spec.identity) {
    result.trajectories.assign(spec.count, source);
    result.transforms.assign(spec.count, RigidTransform::identity());
    result.rejected.assign(spec.count, 0);
    return result;
  }
  const auto target_it = scene.find(spec.target_object);
  if (target_it == scene.end()) fail(ErrorCode::MissingPose, "no mesh for target object '" + spec.target_object + "'");

  const auto [first, last] = skill_segment(source, spec.target_object, target_it->second, model, 3.0 * spec.d_approach);
  const auto pose0 = source.frames[0].objects.find(spec.target_object);
  const Vec3 pivot = pose0->second.translation();

  // The wrist is mapped into each object's frame so distance structures are
  // built once per mesh.
  std::vector<std::pair<std::string, MeshDistance>> obstacles;
  for (const auto& [id, mesh] : scene) {
    if (mesh.face_count() > 0) obstacles.emplace_back(id, MeshDistance(mesh));
  }
  auto collides = [&](const Trajectory& traj) {
    for (std::size_t t = 0; t < traj.size(); ++t) {
      if (t >= first && t <= last) continue;
      const Vec3 wrist = traj.frames[t].config.wrist.translation();
      for (const auto& [id, surface] : obstacles) {
        const auto it = traj.frames[t].objects.find(id);
        if (it == traj.frames[t].objects.end()) continue;
        if (surface.distance(it->second.inverse().apply(wrist)) < spec.clearance) return true;
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < spec.count; ++i) {
    const std::uint64_t seed = spec.seed + i;
    int attempt = 0;
    while (true) {
      const RigidTransform T = sample_scene_transform(spec, pivot, seed, attempt);
      Trajectory traj = transform_demo(source, spec.target_object, first, last, T);
      if (!collides(traj)) {
        result.trajectories.push_back(std::move(traj));
        result.transforms.push_back(T);
        result.rejected.push_back(attempt);
        break;
      }
      if (++attempt > spec.max_retries) {
        fail(ErrorCode::RetryExhausted, "sample " + std::to_string(i) + ": every draw collided during regeneration");
      }
    }
  }
  return result;
}

Trajectory propagate_object_by_grasp(const Trajectory& traj, const std::string& object_id, std::size_t t2) {
  if (t2 >= traj.size()) fail(ErrorCode::InvalidArgument, "t2 beyond the last frame");
  const auto it = traj.frames[t2].objects.find(object_id);
  if (it == traj.frames[t2].objects.end()) fail(ErrorCode::MissingPose, "object pose unknown at t2");
  const RigidTransform in_hand = traj.frames[t2].config.wrist.inverse() * it->second;
  Trajectory out = traj;
  for (std::size_t t = t2 + 1; t < out.size(); ++t) {
    out.frames[t].objects[object_id] = out.frames[t].config.wrist * in_hand;
  }
  return out;
}

}  // namespace dexrecon
