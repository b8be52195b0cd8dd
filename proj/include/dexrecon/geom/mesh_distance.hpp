#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dexrecon/geom/mesh.hpp"

namespace dexrecon {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Exact point-to-surface distance. Triangles are bucketed by centroid into a
// uniform grid; a query visits rings of cells outward and stops once the
// unvisited cells (less the largest triangle radius) are farther than the
// best hit. Per triangle, a bounding-sphere test skips the exact closest
// point computation when it cannot improve.
class MeshDistance {
 public:
  explicit MeshDistance(const TriMesh& mesh);
  double distance(const Vec3& p) const;

 private:
  void scan_cell(std::size_t cell, const Vec3& p, double& best) const;

  std::vector<Vec3> a_, b_, c_;
  std::vector<Vec3> center_;
  std::vector<double> radius_;
  double max_radius_ = 0.0;
  std::vector<std::uint32_t> cell_start_;
  Vec3 origin_ = Vec3::Zero();
  double cell_size_ = 1.0;
  std::array<int, 3> dims_{1, 1, 1};
};

}  // namespace dexrecon
