#include <algorithm>
#include <numeric>

#include "dexrecon/error.hpp"
#include "dexrecon/geom/mesh_distance.hpp"
#include "dexrecon/grasp/grasp.hpp"

namespace dexrecon {

std::vector<Contact> extract_contacts(const TriMesh& robot_mesh, const TriMesh& object, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "contact epsilon must be positive");
  if (robot_mesh.face_count() == 0 || object.empty()) return {};

  Vec3 lo = robot_mesh.vertices()[0], hi = lo;
  for (const Vec3& p : robot_mesh.vertices()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  lo.array() -= epsilon;
  hi.array() += epsilon;

  const MeshDistance robot(robot_mesh);
  std::vector<std::size_t> near;
  for (std::size_t i = 0; i < object.vertex_count(); ++i) {
    const Vec3& p = object.vertices()[i];
    if ((p.array() < lo.array()).any() || (p.array() > hi.array()).any()) continue;
    if (robot.distance(p) < epsilon) near.push_back(i);
  }
  if (near.empty()) return {};

  // Single-linkage clustering at 2 epsilon (union-find over close pairs).
  std::vector<std::size_t> parent(near.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  const double link_sq = 4.0 * epsilon * epsilon;
  const auto& v = object.vertices();
  for (std::size_t a = 0; a < near.size(); ++a) {
    for (std::size_t b = a + 1; b < near.size(); ++b) {
      if ((v[near[a]] - v[near[b]]).squaredNorm() <= link_sq) {
        const std::size_t ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }

  const std::vector<Vec3> normals = vertex_normals(object);
  std::vector<std::size_t> cluster_of(near.size());
  std::vector<std::size_t> roots;
  for (std::size_t a = 0; a < near.size(); ++a) {
    const std::size_t r = find(a);
    auto it = std::find(roots.begin(), roots.end(), r);
    cluster_of[a] = static_cast<std::size_t>(it - roots.begin());
    if (it == roots.end()) roots.push_back(r);
  }
  std::vector<Vec3> sum_p(roots.size(), Vec3::Zero()), sum_n(roots.size(), Vec3::Zero());
  std::vector<double> count(roots.size(), 0.0);
  for (std::size_t a = 0; a < near.size(); ++a) {
    sum_p[cluster_of[a]] += v[near[a]];
    sum_n[cluster_of[a]] += normals[near[a]];
    count[cluster_of[a]] += 1.0;
  }
  std::vector<Contact> contacts;
  for (std::size_t c = 0; c < roots.size(); ++c) {
    const double len = sum_n[c].norm();
    if (!(len > 0.0)) continue;  // opposing normals cancel; no usable direction
    contacts.push_back({sum_p[c] / count[c], sum_n[c] / len});
  }
  return contacts;
}

}  // namespace dexrecon
