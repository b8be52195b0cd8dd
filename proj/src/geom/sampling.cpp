#include "dexrecon/geom/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "dexrecon/error.hpp"
#include "dexrecon/geom/random.hpp"

namespace dexrecon {

PointCloud sample_surface(const TriMesh& mesh, std::size_t n, std::uint64_t seed) {
  if (mesh.face_count() == 0) fail(ErrorCode::EmptyMesh, "cannot sample a mesh without faces");
  if (n == 0) fail(ErrorCode::InvalidArgument, "sample count must be >= 1");

  std::vector<double> cumulative(mesh.face_count());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    total += mesh.face_area(f);
    cumulative[f] = total;
  }
  if (!(total > 0.0)) fail(ErrorCode::EmptyMesh, "mesh has zero surface area");

  Rng rng(seed);
  PointCloud cloud;
  cloud.points.reserve(n);
  cloud.face_indices.reserve(n);
  const auto& v = mesh.vertices();
  for (std::size_t i = 0; i < n; ++i) {
    const double target = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    std::size_t f = static_cast<std::size_t>(it - cumulative.begin());
    if (f >= cumulative.size()) f = cumulative.size() - 1;
    // Skip zero-area faces that upper_bound can land on only at the very end.
    while (f > 0 && mesh.face_area(f) == 0.0) --f;

    const double r1 = std::sqrt(rng.uniform());
    const double r2 = rng.uniform();
    const double a = 1.0 - r1;
    const double b = r1 * (1.0 - r2);
    const double c = r1 * r2;
    const Face& face = mesh.faces()[f];
    cloud.points.emplace_back(a * v[face[0]] + b * v[face[1]] + c * v[face[2]]);
    cloud.face_indices.push_back(static_cast<std::uint32_t>(f));
  }
  return cloud;
}

}  // namespace dexrecon
