#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "dexrecon/robot/point_ik.hpp"

namespace dexrecon {

/// Dense robot-to-object distances: row r is a robot point, column j an
/// object point. Stored row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  const std::vector<double>& values() const { return values_; }
  const double* row(std::size_t r) const { return values_.data() + r * cols_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Exact Euclidean distances between two point sets.
DistanceMatrix distance_matrix(std::span<const Vec3> robot_points, std::span<const Vec3> object_points);

// Binary: "VMDM1\n", ascii "N_R N_O\n", then N_R*N_O little-endian float32,
// row-major. Values are rounded to float32 on write.
std::string format_distance_matrix(const DistanceMatrix& D);
DistanceMatrix parse_distance_matrix(const std::string& bytes);
DistanceMatrix read_distance_matrix(const std::filesystem::path& path);
void write_distance_matrix(const std::filesystem::path& path, const DistanceMatrix& D);

struct Multilateration {
  PointCloud positions;
  std::vector<double> residuals;  // RMS of | |x - a_j| - d_j | per point
};

/// Algebraic multilateration. Subtracting the mean of the sphere equations
/// |x - a_j|^2 = d_j^2 removes the quadratic term, leaving the linear system
/// 2 (a_j - a_mean) . x = (|a_j|^2 - mean |a|^2) - (d_j^2 - mean d^2),
/// solved in the least-squares sense. The matrix depends only on the anchors
/// and is factored once.
Multilateration multilaterate_points(const DistanceMatrix& D, std::span<const Vec3> anchors);

// Rotation + translation minimizing sum |T(source_i) - target_i|^2 (Kabsch,
// with the determinant correction that rules out reflections).
RigidTransform kabsch(std::span<const Vec3> source, std::span<const Vec3> target);

struct GraspResult {
  PointCloud placed_cloud;
  RigidTransform wrist_pose;
  RobotConfig config;
  std::vector<double> multilateration_residuals;
  double fit_rms = 0.0;  // RMS distance between the fitted robot points and placed_cloud
  int iterations = 0;
  bool converged = false;
};

// Stage 1: Kabsch from the canonical cloud (sampler at q_canonical) to
// `placed`, applied to the canonical wrist. Stage 2: point IK over the full
// configuration.
GraspResult fit_grasp_config(const RobotPointSampler& sampler, const PointCloud& placed,
                             const RobotConfig& q_canonical, const IkOptions& options = {});

struct Contact {
  Vec3 point;
  Vec3 normal;  // outward object normal, unit
};

// Object vertices within `epsilon` of the robot surface, clustered by single
// linkage at 2 epsilon. Each cluster gives one contact at the mean position
// with the normalized mean vertex normal.
std::vector<Contact> extract_contacts(const TriMesh& robot_mesh, const TriMesh& object, double epsilon = 0.002);

struct StabilityOptions {
  double mass = 1.0;               // kg
  double mu = 0.5;
  double disturbance_scale = 1.0;  // disturbance force = 0.5 * mass * scale, newtons
  int cone_edges = 8;
  double gravity = 9.81;
  // Upper bound on each contact's normal force; <= 0 selects 2 * mass * gravity.
  double max_normal_force = 0.0;
};

inline constexpr std::array<const char*, 6> kDisturbanceDirections{"+x", "-x", "+y", "-y", "+z", "-z"};

struct StabilityReport {
  std::array<bool, 6> resisted{};
  std::vector<Contact> contacts;
  Vec3 centroid = Vec3::Zero();
  double mu = 0.0;
  double disturbance_newtons = 0.0;
  double max_normal_force = 0.0;
  int cone_edges = 0;
  bool success = false;
  // Simulation protocol this check stands in for.
  int protocol_steps = 300;
  double protocol_displacement_threshold = 0.03;
};

Vec3 disturbance_direction(std::size_t k);

// 6 x (contacts * edges) grasp matrix: column (i, j) is the wrench about
// `centroid` of a unit-normal force along edge j of contact i's linearized
// friction cone (pushing into the object).
Eigen::MatrixXd grasp_matrix(std::span<const Contact> contacts, const Vec3& centroid, double mu, int edges);

// External wrench on the object for disturbance direction k (gravity plus
// disturbance, both through the centroid).
Eigen::Matrix<double, 6, 1> external_wrench(std::size_t k, const StabilityOptions& options);

StabilityReport stability_check(std::span<const Contact> contacts, const Vec3& centroid,
                                const StabilityOptions& options = {});

std::string format_stability_report(const StabilityReport& report);
std::string format_grasp_result(const GraspResult& result, const std::vector<std::string>& joint_names);
std::string format_contacts(std::span<const Contact> contacts);
std::vector<Contact> parse_contacts(const std::string& text);

}  // namespace dexrecon
