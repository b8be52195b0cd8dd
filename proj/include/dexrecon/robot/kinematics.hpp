#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dexrecon/robot/model.hpp"

namespace dexrecon {

struct KinematicState {
  std::vector<RigidTransform> link_poses;    // indexed by link
  std::vector<RigidTransform> joint_frames;  // parent pose * joint origin, before joint motion
};

// Root pose = q.wrist; child = parent * origin * motion(axis, value).
// Values outside joint limits (by more than 1e-9) are appended to `warnings`
// when given; they are evaluated as-is.
KinematicState compute_kinematics(const RobotModel& model, const RobotConfig& q,
                                  std::vector<std::string>* warnings = nullptr);

std::map<std::string, RigidTransform> forward_kinematics(const RobotModel& model, const RobotConfig& q,
                                                         std::vector<std::string>* warnings = nullptr);

struct RobotMesh {
  TriMesh mesh;
  std::vector<std::uint32_t> vertex_link;  // link index of every vertex
};

// Union of all link geometry at q, links in declaration order.
RobotMesh robot_mesh_at(const RobotModel& model, const RobotConfig& q);
// Vertex positions of robot_mesh_at without building the mesh.
std::vector<Vec3> robot_vertices_at(const RobotModel& model, const RobotConfig& q);

/// Fixed surface samples attached to links.
///
/// Samples are drawn once in each link's own frame, with per-link counts
/// apportioned by surface area (largest remainder), and are carried along
/// by forward kinematics. Point i therefore always belongs to the same link
/// and the same spot on it, whatever the configuration. The model must
/// outlive the sampler.
class RobotPointSampler {
 public:
  RobotPointSampler(const RobotModel& model, std::size_t n, std::uint64_t seed);

  PointCloud at(const RobotConfig& q) const;
  std::vector<Vec3> transport(const KinematicState& state) const;

  std::size_t size() const { return local_.size(); }
  const std::vector<Vec3>& local_points() const { return local_; }
  const std::vector<std::uint32_t>& point_links() const { return link_; }
  const std::vector<std::size_t>& link_counts() const { return counts_; }
  const RobotModel& model() const { return *model_; }

 private:
  const RobotModel* model_;
  std::vector<Vec3> local_;
  std::vector<std::uint32_t> link_;
  std::vector<std::size_t> counts_;
};

PointCloud robot_points_at(const RobotModel& model, const RobotConfig& q, std::size_t n, std::uint64_t seed);

}  // namespace dexrecon
