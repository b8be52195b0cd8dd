#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dexrecon/geom/mesh.hpp"

namespace dexrecon {

enum class JointType { Revolute, Continuous, Prismatic, Fixed };

struct BoxShape {
  Vec3 size;
};
struct SphereShape {
  double radius;
};
struct CylinderShape {
  double radius;
  double length;
};
struct MeshShape {
  std::string filename;
  Vec3 scale = Vec3::Ones();
  std::shared_ptr<const TriMesh> mesh;  // null when the file could not be resolved
};

struct Geometry {
  std::variant<BoxShape, SphereShape, CylinderShape, MeshShape> shape;
  RigidTransform origin;
};

struct Link {
  std::string name;
  std::vector<Geometry> geometries;
};

struct Joint {
  std::string name;
  JointType type = JointType::Fixed;
  std::string parent;
  std::string child;
  RigidTransform origin;
  Vec3 axis = Vec3::UnitX();
  double lower = 0.0;
  double upper = 0.0;
  bool has_limits = true;

  bool movable() const { return type != JointType::Fixed; }
  // Continuous joints, and revolute/prismatic joints declared without a
  // <limit>, are unbounded.
  bool limited() const {
    return has_limits && (type == JointType::Revolute || type == JointType::Prismatic);
  }
};

/// Wrist pose plus one value per movable joint, in document order.
struct RobotConfig {
  RigidTransform wrist;
  std::vector<double> joint_angles;
};

/// Articulated hand: a tree of links connected by joints, rooted at the link
/// that is nobody's child. Immutable after construction.
class RobotModel {
 public:
  RobotModel(std::vector<Link> links, std::vector<Joint> joints,
             std::vector<std::string> warnings = {});

  const std::vector<Link>& links() const { return links_; }
  const std::vector<Joint>& joints() const { return joints_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::size_t root_link() const { return root_; }
  const std::string& root_name() const { return links_[root_].name; }
  std::optional<std::size_t> link_index(const std::string& name) const;
  std::size_t require_link(const std::string& name) const;

  // Number of movable joints (length of RobotConfig::joint_angles).
  std::size_t dof() const { return movable_.size(); }
  // Joint index (into joints()) of the k-th configuration coordinate.
  std::size_t movable_joint(std::size_t k) const { return movable_[k]; }
  // Configuration coordinate of a joint, or nullopt for fixed joints.
  std::optional<std::size_t> coordinate_of_joint(std::size_t joint) const { return coordinate_[joint]; }
  std::vector<std::string> joint_names() const;

  // Joint connecting a link to its parent; nullopt for the root.
  std::optional<std::size_t> parent_joint(std::size_t link) const { return parent_joint_[link]; }
  // Links ordered parents-before-children, starting at the root.
  const std::vector<std::size_t>& topological_links() const { return order_; }
  // True if `joint` lies on the chain from the root to `link`.
  bool joint_moves_link(std::size_t joint, std::size_t link) const;
  // Links without children.
  std::vector<std::size_t> leaf_links() const;

  // All link geometry in the link frame; empty for links without geometry.
  const TriMesh& link_mesh(std::size_t link) const { return link_meshes_[link]; }
  // Resolved meshes exist for every geometry entry.
  bool geometry_complete() const { return missing_geometry_.empty(); }
  const std::vector<std::string>& missing_geometry() const { return missing_geometry_; }

  // All joints at zero, clamped into their limits; wrist at identity.
  RobotConfig zero_config() const;
  // Clamp each joint into [lower, upper]; continuous joints are unbounded.
  void clamp_to_limits(std::vector<double>& angles) const;
  void check_dimension(const RobotConfig& q) const;

 private:
  std::vector<Link> links_;
  std::vector<Joint> joints_;
  std::vector<std::string> warnings_;
  std::size_t root_ = 0;
  std::vector<std::size_t> movable_;
  std::vector<std::optional<std::size_t>> coordinate_;
  std::vector<std::optional<std::size_t>> parent_joint_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<bool>> moves_;  // [joint][link]
  std::vector<TriMesh> link_meshes_;
  std::vector<std::string> missing_geometry_;
};

TriMesh tessellate(const Geometry& geometry);

}  // namespace dexrecon
