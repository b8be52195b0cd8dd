#include "dexrecon/geom/mesh.hpp"

#include <string>

#include "dexrecon/error.hpp"

namespace dexrecon {

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  const auto n = static_cast<std::uint32_t>(vertices_.size());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const Face& face = faces_[f];
    if (face[0] >= n || face[1] >= n || face[2] >= n) {
      fail(ErrorCode::InvalidArgument, "face " + std::to_string(f) + " references a missing vertex");
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
      fail(ErrorCode::InvalidArgument, "face " + std::to_string(f) + " is degenerate");
    }
  }
  for (const Vec3& v : vertices_) {
    if (!v.allFinite()) fail(ErrorCode::InvalidArgument, "non-finite vertex coordinate");
  }
}

double TriMesh::face_area(std::size_t f) const {
  const Face& face = faces_[f];
  const Vec3& a = vertices_[face[0]];
  return 0.5 * (vertices_[face[1]] - a).cross(vertices_[face[2]] - a).norm();
}

Vec3 TriMesh::face_normal(std::size_t f) const {
  const Face& face = faces_[f];
  const Vec3& a = vertices_[face[0]];
  const Vec3 n = (vertices_[face[1]] - a).cross(vertices_[face[2]] - a);
  const double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

double TriMesh::surface_area() const {
  double total = 0.0;
  for (std::size_t f = 0; f < faces_.size(); ++f) total += face_area(f);
  return total;
}

TriMesh transformed(const TriMesh& mesh, const RigidTransform& T) {
  return TriMesh(transformed(std::span<const Vec3>(mesh.vertices()), T), mesh.faces());
}

PointCloud transformed(const PointCloud& cloud, const RigidTransform& T) {
  return PointCloud{transformed(std::span<const Vec3>(cloud.points), T), cloud.face_indices};
}

std::vector<Vec3> transformed(std::span<const Vec3> points, const RigidTransform& T) {
  const Mat3 R = T.rotation_matrix();
  const Vec3& t = T.translation();
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const Vec3& p : points) out.emplace_back(R * p + t);
  return out;
}

TriMesh merge(std::span<const TriMesh> meshes) {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  for (const TriMesh& m : meshes) {
    const auto offset = static_cast<std::uint32_t>(vertices.size());
    vertices.insert(vertices.end(), m.vertices().begin(), m.vertices().end());
    for (const Face& f : m.faces()) faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
  }
  return TriMesh(std::move(vertices), std::move(faces));
}

Vec3 vertex_centroid(std::span<const Vec3> points) {
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : points) sum += p;
  return points.empty() ? sum : Vec3(sum / static_cast<double>(points.size()));
}

Vec3 surface_centroid(const TriMesh& mesh) {
  Vec3 sum = Vec3::Zero();
  double area = 0.0;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const Face& face = mesh.faces()[f];
    const double a = mesh.face_area(f);
    sum += a * (mesh.vertices()[face[0]] + mesh.vertices()[face[1]] + mesh.vertices()[face[2]]) / 3.0;
    area += a;
  }
  if (area <= 0.0) return vertex_centroid(mesh.vertices());
  return sum / area;
}

std::vector<Vec3> vertex_normals(const TriMesh& mesh) {
  std::vector<Vec3> normals(mesh.vertex_count(), Vec3::Zero());
  const auto& v = mesh.vertices();
  for (const Face& f : mesh.faces()) {
    // Unnormalized cross product = 2 * area * unit normal.
    const Vec3 n = (v[f[1]] - v[f[0]]).cross(v[f[2]] - v[f[0]]);
    for (std::uint32_t i : f) normals[i] += n;
  }
  const Vec3 c = vertex_centroid(v);
  std::size_t inward = 0, outward = 0;
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const double len = normals[i].norm();
    if (len > 0.0) normals[i] /= len;
    const double s = (v[i] - c).dot(normals[i]);
    if (s > 0.0) ++outward;
    else if (s < 0.0) ++inward;
  }
  if (inward > outward) {
    for (Vec3& n : normals) n = -n;
  }
  return normals;
}

}  // namespace dexrecon
