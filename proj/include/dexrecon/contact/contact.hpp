#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dexrecon/geom/nearest.hpp"
#include "dexrecon/robot/kinematics.hpp"

namespace dexrecon {

struct ContactMap {
  double c_rad = 0.01;
  std::vector<double> values;  // one per vertex, in [0, 1]
};

// Per-vertex max(0, 1 - d / c_rad), d = distance from the subject vertex to
// the nearest vertex of `other`.
ContactMap contact_map(const TriMesh& subject, const TriMesh& other, double c_rad);
ContactMap contact_map(std::span<const Vec3> subject, std::span<const Vec3> other, double c_rad);

struct ContactTargets {
  std::vector<double> hand;    // per robot-mesh vertex
  std::vector<double> object;  // per object vertex
};

struct ContactEnergyOptions {
  double c_rad = 0.01;
  double penetration_weight = 10.0;
  // Drops the penetration term, leaving only the two map mismatch sums.
  bool strict_formula = false;
};

struct ContactEnergyTerms {
  double object_term = 0.0;   // sum |C_obj - target_obj|
  double hand_term = 0.0;     // sum |C_hand - target_hand|
  double penetration = 0.0;   // sum of per-vertex depths, meters
  double max_penetration = 0.0;
  double total = 0.0;
};

// Depth of each hand vertex below the object surface, estimated from the
// nearest object vertex o and its outward normal n: max(0, -(h - o) . n).
// Vertices outside the object's bounding box are 0.
std::vector<double> penetration_depths(std::span<const Vec3> hand, const NearestIndex& object_index,
                                       std::span<const Vec3> object_vertices,
                                       std::span<const Vec3> object_normals);

// Energy between an already-posed hand mesh and the object.
ContactEnergyTerms contact_energy_terms(const TriMesh& hand, const TriMesh& object, const ContactTargets& targets,
                                        const ContactEnergyOptions& options = {});

/// Contact alignment energy of the robot hand at q against a fixed object.
/// Object-side structures (nearest-vertex index, vertex normals) are built
/// once; each evaluation rebuilds only the hand side.
class ContactObjective {
 public:
  ContactObjective(const RobotModel& model, const TriMesh& object, ContactTargets targets,
                   const ContactEnergyOptions& options = {});

  ContactEnergyTerms evaluate(const RobotConfig& q) const;
  double energy(const RobotConfig& q) const { return evaluate(q).total; }
  // Hand-side and object-side contact maps at q.
  std::pair<ContactMap, ContactMap> maps(const RobotConfig& q) const;
  // Central differences in tangent coordinates.
  Eigen::VectorXd gradient(const RobotConfig& q, double h = 1e-5) const;

  const ContactTargets& targets() const { return targets_; }
  const ContactEnergyOptions& options() const { return options_; }

 private:
  ContactEnergyTerms evaluate_vertices(const std::vector<Vec3>& hand) const;

  const RobotModel* model_;
  std::vector<Vec3> object_vertices_;
  std::vector<Vec3> object_normals_;
  NearestIndex object_index_;
  ContactTargets targets_;
  ContactEnergyOptions options_;
};

double contact_energy(const RobotModel& model, const RobotConfig& q, const TriMesh& object,
                      const ContactTargets& targets, double c_rad, double penetration_weight);

struct ContactOptOptions {
  int max_iterations = 100;
  double fd_step = 1e-5;
  double initial_step = 1e-3;  // max-norm of the first trial step (m / rad)
  double min_step = 1e-9;
  double armijo = 1e-4;
  double shrink = 0.5;
};

struct ContactOptResult {
  RobotConfig config;
  std::vector<double> energy_trace;  // initial energy, then one entry per accepted step
  int iterations = 0;
  int accepted_steps = 0;
};

// Gradient descent on the contact energy with Armijo backtracking.
ContactOptResult optimize_contact(const RobotModel& model, const RobotConfig& q_init, const TriMesh& object,
                                  const ContactTargets& targets, const ContactEnergyOptions& energy_options = {},
                                  const ContactOptOptions& options = {});

struct HeuristicTargetOptions {
  std::vector<std::string> fingertip_links;  // empty = leaf links
  std::size_t k_nearest = 6;
};

// Fingertip vertices closer than 3 c_rad to the object get target 1, as do
// the k nearest object vertices of each such fingertip vertex.
ContactTargets heuristic_targets(const RobotModel& model, const RobotConfig& q, const TriMesh& object, double c_rad,
                                 const HeuristicTargetOptions& options = {});

// {"c_rad": r, "values": [...]}
std::string format_contact_map(const ContactMap& map);
ContactMap parse_contact_map(const std::string& text, std::optional<std::size_t> expected_size = std::nullopt);
ContactMap read_contact_map(const std::filesystem::path& path, std::optional<std::size_t> expected_size = std::nullopt);
void write_contact_map(const std::filesystem::path& path, const ContactMap& map);

}  // namespace dexrecon
