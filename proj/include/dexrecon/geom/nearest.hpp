#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dexrecon/geom/mesh.hpp"

namespace dexrecon {

struct NearestHit {
  double distance;
  std::size_t index;
};

/// Exact nearest-point queries over a fixed point set.
///
/// Points are bucketed into a uniform voxel grid sized from their bounds; a
/// query scans rings of cells outward until no unvisited cell can hold a
/// closer point. Below 64 points the set is scanned directly. Results equal a
/// brute-force scan bit for bit, with ties going to the lowest index.
class NearestIndex {
 public:
  explicit NearestIndex(std::span<const Vec3> points);

  NearestHit nearest(const Vec3& query) const;
  // Appends the indices of all points with distance <= radius (any order).
  void within(const Vec3& query, double radius, std::vector<std::size_t>& out) const;
  std::size_t size() const { return size_; }

  static constexpr std::size_t kBruteForceThreshold = 64;

 private:
  void scan_cell(std::size_t cell, const Vec3& q, double& best_sq, std::size_t& best_index) const;

  std::size_t size_ = 0;
  bool brute_force_ = true;
  // Coordinates in structure-of-arrays form, ordered by cell then index.
  std::vector<double> xs_, ys_, zs_;
  std::vector<std::size_t> original_index_;
  std::vector<std::uint32_t> cell_start_;
  Vec3 origin_ = Vec3::Zero();
  Vec3 lo_ = Vec3::Zero(), hi_ = Vec3::Zero();
  double cell_size_ = 1.0;
  std::array<int, 3> dims_{1, 1, 1};
};

std::vector<NearestHit> nearest_distances(std::span<const Vec3> query, std::span<const Vec3> target);
std::vector<NearestHit> nearest_distances(const PointCloud& query, const PointCloud& target);

}  // namespace dexrecon
