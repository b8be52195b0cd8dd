#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dexrecon/geom/transform.hpp"

namespace dexrecon {

using Face = std::array<std::uint32_t, 3>;

/// Indexed triangle mesh. Construction validates that every face references
/// three distinct, in-range vertices; instances are immutable afterwards.
class TriMesh {
 public:
  TriMesh() = default;
  TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t face_count() const { return faces_.size(); }
  bool empty() const { return vertices_.empty(); }

  double face_area(std::size_t f) const;
  Vec3 face_normal(std::size_t f) const;  // unit; zero for sliver faces
  double surface_area() const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
};

struct PointCloud {
  std::vector<Vec3> points;
  // Source face per point when produced by surface sampling; empty otherwise.
  std::vector<std::uint32_t> face_indices;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

TriMesh transformed(const TriMesh& mesh, const RigidTransform& T);
PointCloud transformed(const PointCloud& cloud, const RigidTransform& T);
std::vector<Vec3> transformed(std::span<const Vec3> points, const RigidTransform& T);

// Concatenate meshes; face indices of later meshes are offset.
TriMesh merge(std::span<const TriMesh> meshes);

Vec3 vertex_centroid(std::span<const Vec3> points);
// Area-weighted centroid of the surface.
Vec3 surface_centroid(const TriMesh& mesh);

/// Per-vertex unit normals: area-weighted average of incident face normals.
/// The whole field is flipped if the majority of vertices would point toward
/// the vertex centroid, so closed meshes with inward winding still come out
/// outward-facing.
std::vector<Vec3> vertex_normals(const TriMesh& mesh);

}  // namespace dexrecon
