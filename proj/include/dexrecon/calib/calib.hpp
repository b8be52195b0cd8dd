#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dexrecon/demo/trajectory.hpp"

namespace dexrecon {

// Minimal rotation taking normalize(g_cam) to (0, 0, -1): axis g x (0,0,-1),
// angle acos(g . (0,0,-1)). The antipodal case rotates 180 degrees about x.
RigidTransform gravity_rotation(const Vec3& g_cam);

// Left-multiplies every wrist and object pose by R.
Trajectory align_trajectory(const Trajectory& traj, const RigidTransform& R);

/// Metric depth per pixel, row-major; values <= 0 mark missing depth.
struct DepthGrid {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * cols + col]; }
  void validate() const;
};

// Mean depth over the keypoints' nearest pixels (u = column, v = row),
// skipping pixels outside the grid and invalid depths.
double hand_depth_correction(std::span<const Eigen::Vector2d> keypoints, const DepthGrid& depth);

struct CameraIntrinsics {
  double fx = 0.0, fy = 0.0, cx = 0.0, cy = 0.0;
  int width = 0, height = 0;

  void validate() const;
};

struct MaskImage {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  // nonzero = occupied

  bool at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * cols + col] != 0; }
  std::size_t occupied() const;
};

// Marks the pixel of every point in front of the camera, then dilates by
// `dilation` pixels (square neighborhood). `camera_from_points` maps the
// points into the camera frame (x right, y down, z forward).
MaskImage render_silhouette(std::span<const Vec3> points, const RigidTransform& camera_from_points,
                            const CameraIntrinsics& intrinsics, int dilation = 1);

// Intersection over union; two empty masks score 1.
double mask_iou(const MaskImage& a, const MaskImage& b);

// Points scaled by s about `center`.
std::vector<Vec3> scale_about(std::span<const Vec3> points, const Vec3& center, double s);

struct ScaleSearchOptions {
  std::size_t samples = 50000;
  std::uint64_t seed = 0;
  int dilation = 1;
};

struct ScaleSearchResult {
  double best_scale = 1.0;
  std::size_t best_index = 0;
  std::vector<double> errors;  // 1 - IoU averaged over frames, per candidate
};

// For each candidate s the mesh is scaled about its surface centroid and
// rendered in every frame at camera_pose * object_poses[f]. The lowest error
// wins; ties go to the candidate closest to 1, then to the smaller one.
ScaleSearchResult scale_search(const TriMesh& mesh, const RigidTransform& camera_pose,
                               const CameraIntrinsics& intrinsics, std::span<const MaskImage> masks,
                               std::span<const RigidTransform> object_poses, std::span<const double> candidates,
                               const ScaleSearchOptions& options = {});

// 0.5, 0.6, ..., 2.0
std::vector<double> default_scale_candidates();

// Binary depth: "VMGRID1\n", ascii "rows cols\n", then little-endian float32
// row-major.
std::string format_depth_grid(const DepthGrid& grid);
DepthGrid parse_depth_grid(const std::string& bytes);
DepthGrid read_depth_grid(const std::filesystem::path& path);
void write_depth_grid(const std::filesystem::path& path, const DepthGrid& grid);

// Binary PGM (P5); written with maxval 255 and occupied pixels as 255.
std::string format_pgm(const MaskImage& mask);
MaskImage parse_pgm(const std::string& bytes);
MaskImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const MaskImage& mask);

// {"fx":..,"fy":..,"cx":..,"cy":..,"width":..,"height":..}
std::string format_intrinsics(const CameraIntrinsics& intrinsics);
CameraIntrinsics parse_intrinsics(const std::string& text);
CameraIntrinsics read_intrinsics(const std::filesystem::path& path);

}  // namespace dexrecon
