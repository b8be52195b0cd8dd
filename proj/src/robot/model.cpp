#include "dexrecon/robot/model.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "dexrecon/error.hpp"
#include "dexrecon/geom/primitives.hpp"

namespace dexrecon {

TriMesh tessellate(const Geometry& geometry) {
  TriMesh local = std::visit(
      [](const auto& shape) -> TriMesh {
        using S = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<S, BoxShape>) {
          return make_box(shape.size);
        } else if constexpr (std::is_same_v<S, SphereShape>) {
          return make_uv_sphere(shape.radius, 20, 20);
        } else if constexpr (std::is_same_v<S, CylinderShape>) {
          return make_cylinder(shape.radius, shape.length, 24, 1);
        } else {
          if (!shape.mesh) fail(ErrorCode::MissingGeometry, "mesh not loaded: " + shape.filename);
          std::vector<Vec3> v;
          v.reserve(shape.mesh->vertex_count());
          for (const Vec3& p : shape.mesh->vertices()) v.push_back(p.cwiseProduct(shape.scale));
          return TriMesh(std::move(v), shape.mesh->faces());
        }
      },
      geometry.shape);
  return transformed(local, geometry.origin);
}

RobotModel::RobotModel(std::vector<Link> links, std::vector<Joint> joints,
                       std::vector<std::string> warnings)
    : links_(std::move(links)), joints_(std::move(joints)), warnings_(std::move(warnings)) {
  if (links_.empty()) fail(ErrorCode::InvalidArgument, "robot has no links");

  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (!by_name.emplace(links_[i].name, i).second) {
      fail(ErrorCode::InvalidArgument, "duplicate link name: " + links_[i].name);
    }
  }

  parent_joint_.assign(links_.size(), std::nullopt);
  std::vector<std::vector<std::size_t>> children(links_.size());
  coordinate_.assign(joints_.size(), std::nullopt);
  for (std::size_t j = 0; j < joints_.size(); ++j) {
    Joint& joint = joints_[j];
    const auto parent = by_name.find(joint.parent);
    const auto child = by_name.find(joint.child);
    if (parent == by_name.end()) fail(ErrorCode::MissingLink, "joint " + joint.name + " references unknown parent link " + joint.parent);
    if (child == by_name.end()) fail(ErrorCode::MissingLink, "joint " + joint.name + " references unknown child link " + joint.child);
    if (parent_joint_[child->second]) {
      fail(ErrorCode::CyclicKinematics, "link " + joint.child + " has more than one parent joint");
    }
    parent_joint_[child->second] = j;
    children[parent->second].push_back(child->second);

    if (joint.movable()) {
      const double n = joint.axis.norm();
      if (!(n > 1e-12) || !joint.axis.allFinite()) {
        fail(ErrorCode::NonUnitAxis, "joint " + joint.name + " has a zero axis");
      }
      joint.axis /= n;
      if (std::abs(joint.axis.norm() - 1.0) > 1e-6) fail(ErrorCode::NonUnitAxis, "joint " + joint.name + " axis cannot be normalized");
      if (!joint.limited()) {
        joint.lower = -std::numeric_limits<double>::infinity();
        joint.upper = std::numeric_limits<double>::infinity();
      } else if (joint.lower > joint.upper) {
        fail(ErrorCode::InvalidArgument, "joint " + joint.name + " has lower > upper");
      }
      coordinate_[j] = movable_.size();
      movable_.push_back(j);
    }
  }

  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (!parent_joint_[i]) roots.push_back(i);
  }
  if (roots.empty()) fail(ErrorCode::CyclicKinematics, "every link has a parent: the joint graph has a cycle");
  if (roots.size() > 1) {
    fail(ErrorCode::InvalidArgument, "joint graph is disconnected: links " + links_[roots[0]].name +
                                         " and " + links_[roots[1]].name + " both lack a parent");
  }
  root_ = roots.front();

  // Breadth-first from the root; anything unreached sits on a cycle.
  order_.push_back(root_);
  for (std::size_t head = 0; head < order_.size(); ++head) {
    for (std::size_t c : children[order_[head]]) order_.push_back(c);
  }
  if (order_.size() != links_.size()) {
    fail(ErrorCode::CyclicKinematics, "joint graph contains a cycle");
  }

  moves_.assign(joints_.size(), std::vector<bool>(links_.size(), false));
  for (std::size_t link : order_) {
    if (const auto pj = parent_joint_[link]) {
      const std::size_t parent = by_name.find(joints_[*pj].parent)->second;
      for (std::size_t j = 0; j < joints_.size(); ++j) moves_[j][link] = moves_[j][parent];
      moves_[*pj][link] = true;
    }
  }

  link_meshes_.resize(links_.size());
  for (std::size_t i = 0; i < links_.size(); ++i) {
    std::vector<TriMesh> parts;
    for (const Geometry& g : links_[i].geometries) {
      if (const auto* m = std::get_if<MeshShape>(&g.shape); m && !m->mesh) {
        missing_geometry_.push_back(links_[i].name + ": " + m->filename);
        continue;
      }
      parts.push_back(tessellate(g));
    }
    link_meshes_[i] = merge(parts);
  }
}

std::optional<std::size_t> RobotModel::link_index(const std::string& name) const {
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (links_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t RobotModel::require_link(const std::string& name) const {
  if (auto i = link_index(name)) return *i;
  fail(ErrorCode::MissingLink, "unknown link: " + name);
}

std::vector<std::string> RobotModel::joint_names() const {
  std::vector<std::string> names;
  for (std::size_t j : movable_) names.push_back(joints_[j].name);
  return names;
}

bool RobotModel::joint_moves_link(std::size_t joint, std::size_t link) const {
  return moves_[joint][link];
}

std::vector<std::size_t> RobotModel::leaf_links() const {
  std::vector<bool> has_child(links_.size(), false);
  for (const Joint& j : joints_) has_child[*link_index(j.parent)] = true;
  std::vector<std::size_t> leaves;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (!has_child[i]) leaves.push_back(i);
  }
  return leaves;
}

RobotConfig RobotModel::zero_config() const {
  RobotConfig q;
  q.joint_angles.assign(dof(), 0.0);
  clamp_to_limits(q.joint_angles);
  return q;
}

void RobotModel::clamp_to_limits(std::vector<double>& angles) const {
  for (std::size_t k = 0; k < movable_.size() && k < angles.size(); ++k) {
    const Joint& j = joints_[movable_[k]];
    if (j.limited()) angles[k] = std::clamp(angles[k], j.lower, j.upper);
  }
}

void RobotModel::check_dimension(const RobotConfig& q) const {
  if (q.joint_angles.size() != dof()) {
    fail(ErrorCode::DimensionMismatch, "configuration has " + std::to_string(q.joint_angles.size()) +
                                           " joint values, model has " + std::to_string(dof()));
  }
}

}  // namespace dexrecon
