#include "dexrecon/robot/kinematics.hpp"

#include <algorithm>
#include <numeric>

#include "dexrecon/error.hpp"
#include "dexrecon/geom/sampling.hpp"

namespace dexrecon {

namespace {

RigidTransform joint_motion(const Joint& joint, double value) {
  switch (joint.type) {
    case JointType::Revolute:
    case JointType::Continuous:
      return RigidTransform::from_axis_angle(joint.axis, value);
    case JointType::Prismatic:
      return RigidTransform::from_translation(joint.axis * value);
    case JointType::Fixed:
      break;
  }
  return RigidTransform::identity();
}

void require_geometry(const RobotModel& model) {
  if (!model.geometry_complete()) {
    fail(ErrorCode::MissingGeometry, "unresolved link geometry: " + model.missing_geometry().front());
  }
}

}  // namespace

KinematicState compute_kinematics(const RobotModel& model, const RobotConfig& q,
                                  std::vector<std::string>* warnings) {
  model.check_dimension(q);
  KinematicState state;
  state.link_poses.resize(model.links().size());
  state.joint_frames.resize(model.joints().size());
  state.link_poses[model.root_link()] = q.wrist;
  for (std::size_t link : model.topological_links()) {
    const auto pj = model.parent_joint(link);
    if (!pj) continue;
    const Joint& joint = model.joints()[*pj];
    const std::size_t parent = *model.link_index(joint.parent);
    double value = 0.0;
    if (const auto k = model.coordinate_of_joint(*pj)) {
      value = q.joint_angles[*k];
      if (warnings && joint.limited() && (value < joint.lower - 1e-9 || value > joint.upper + 1e-9)) {
        warnings->push_back("joint " + joint.name + " value " + std::to_string(value) + " outside limits");
      }
    }
    state.joint_frames[*pj] = state.link_poses[parent] * joint.origin;
    state.link_poses[link] = state.joint_frames[*pj] * joint_motion(joint, value);
  }
  return state;
}

std::map<std::string, RigidTransform> forward_kinematics(const RobotModel& model, const RobotConfig& q,
                                                         std::vector<std::string>* warnings) {
  const KinematicState state = compute_kinematics(model, q, warnings);
  std::map<std::string, RigidTransform> out;
  for (std::size_t i = 0; i < model.links().size(); ++i) out.emplace(model.links()[i].name, state.link_poses[i]);
  return out;
}

std::vector<Vec3> robot_vertices_at(const RobotModel& model, const RobotConfig& q) {
  require_geometry(model);
  const KinematicState state = compute_kinematics(model, q);
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < model.links().size(); ++i) {
    const Mat3 R = state.link_poses[i].rotation_matrix();
    const Vec3& t = state.link_poses[i].translation();
    for (const Vec3& v : model.link_mesh(i).vertices()) out.emplace_back(R * v + t);
  }
  return out;
}

RobotMesh robot_mesh_at(const RobotModel& model, const RobotConfig& q) {
  std::vector<Vec3> vertices = robot_vertices_at(model, q);
  std::vector<Face> faces;
  std::vector<std::uint32_t> vertex_link;
  std::uint32_t offset = 0;
  for (std::size_t i = 0; i < model.links().size(); ++i) {
    const TriMesh& m = model.link_mesh(i);
    for (const Face& f : m.faces()) faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
    vertex_link.insert(vertex_link.end(), m.vertex_count(), static_cast<std::uint32_t>(i));
    offset += static_cast<std::uint32_t>(m.vertex_count());
  }
  return RobotMesh{TriMesh(std::move(vertices), std::move(faces)), std::move(vertex_link)};
}

RobotPointSampler::RobotPointSampler(const RobotModel& model, std::size_t n, std::uint64_t seed)
    : model_(&model) {
  require_geometry(model);
  if (n == 0) fail(ErrorCode::InvalidArgument, "point count must be >= 1");
  const std::size_t links = model.links().size();
  std::vector<double> area(links);
  for (std::size_t i = 0; i < links; ++i) area[i] = model.link_mesh(i).surface_area();
  const double total = std::accumulate(area.begin(), area.end(), 0.0);
  if (!(total > 0.0)) fail(ErrorCode::EmptyMesh, "robot has no surface to sample");

  // Largest-remainder apportionment; remainder ties go to the lower link index.
  counts_.assign(links, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < links; ++i) {
    const double exact = static_cast<double>(n) * area[i] / total;
    counts_[i] = static_cast<std::size_t>(exact);
    assigned += counts_[i];
    if (area[i] > 0.0) remainders.emplace_back(exact - static_cast<double>(counts_[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts_[remainders[k % remainders.size()].second];

  for (std::size_t i = 0; i < links; ++i) {
    if (counts_[i] == 0) continue;
    const PointCloud local = sample_surface(model.link_mesh(i), counts_[i], seed ^ (0x9E3779B97F4A7C15ull * (i + 1)));
    local_.insert(local_.end(), local.points.begin(), local.points.end());
    link_.insert(link_.end(), counts_[i], static_cast<std::uint32_t>(i));
  }
}

std::vector<Vec3> RobotPointSampler::transport(const KinematicState& state) const {
  std::vector<Vec3> out;
  out.reserve(local_.size());
  for (std::size_t i = 0; i < local_.size(); ++i) out.push_back(state.link_poses[link_[i]].apply(local_[i]));
  return out;
}

PointCloud RobotPointSampler::at(const RobotConfig& q) const {
  return PointCloud{transport(compute_kinematics(*model_, q)), {}};
}

PointCloud robot_points_at(const RobotModel& model, const RobotConfig& q, std::size_t n, std::uint64_t seed) {
  return RobotPointSampler(model, n, seed).at(q);
}

}  // namespace dexrecon
