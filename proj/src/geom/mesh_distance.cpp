#include "dexrecon/geom/mesh_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dexrecon/error.hpp"

namespace dexrecon {

// Region-based closest point (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

MeshDistance::MeshDistance(const TriMesh& mesh) {
  if (mesh.face_count() == 0) fail(ErrorCode::EmptyMesh, "distance query needs a mesh with faces");
  const auto& v = mesh.vertices();
  const std::size_t n = mesh.face_count();

  std::vector<Vec3> centers(n);
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const Face& f = mesh.faces()[i];
    centers[i] = (v[f[0]] + v[f[1]] + v[f[2]]) / 3.0;
    lo = lo.cwiseMin(centers[i]);
    hi = hi.cwiseMax(centers[i]);
  }
  const Vec3 extent = hi - lo;
  cell_size_ = std::max(extent.maxCoeff(), 1e-12) / std::max(1.0, std::cbrt(static_cast<double>(n)));
  for (int a = 0; a < 3; ++a) {
    dims_[a] = std::clamp(static_cast<int>(std::floor(extent[a] / cell_size_)) + 1, 1, 256);
  }
  origin_ = lo;

  const std::size_t cells = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  std::vector<std::uint32_t> cell_of(n);
  cell_start_.assign(cells + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::array<int, 3> c{};
    for (int a = 0; a < 3; ++a) {
      c[a] = std::clamp(static_cast<int>(std::floor((centers[i][a] - origin_[a]) / cell_size_)), 0, dims_[a] - 1);
    }
    cell_of[i] = static_cast<std::uint32_t>(c[0] + dims_[0] * (c[1] + dims_[1] * c[2]));
    ++cell_start_[cell_of[i] + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) cell_start_[c + 1] += cell_start_[c];

  a_.resize(n);
  b_.resize(n);
  c_.resize(n);
  center_.resize(n);
  radius_.resize(n);
  std::vector<std::uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Face& f = mesh.faces()[i];
    const std::uint32_t slot = cursor[cell_of[i]]++;
    a_[slot] = v[f[0]];
    b_[slot] = v[f[1]];
    c_[slot] = v[f[2]];
    center_[slot] = centers[i];
    radius_[slot] = std::max({(v[f[0]] - centers[i]).norm(), (v[f[1]] - centers[i]).norm(),
                              (v[f[2]] - centers[i]).norm()});
    max_radius_ = std::max(max_radius_, radius_[slot]);
  }
}

void MeshDistance::scan_cell(std::size_t cell, const Vec3& p, double& best) const {
  for (std::uint32_t i = cell_start_[cell]; i < cell_start_[cell + 1]; ++i) {
    if ((p - center_[i]).norm() - radius_[i] >= best) continue;
    best = std::min(best, (p - closest_point_on_triangle(p, a_[i], b_[i], c_[i])).norm());
  }
}

double MeshDistance::distance(const Vec3& p) const {
  std::array<int, 3> c{};
  for (int a = 0; a < 3; ++a) {
    const double f = std::floor((p[a] - origin_[a]) / cell_size_);
    c[a] = static_cast<int>(std::clamp(f, 0.0, static_cast<double>(dims_[a] - 1)));
  }
  double best = std::numeric_limits<double>::infinity();
  const int max_ring = std::max({dims_[0], dims_[1], dims_[2]});
  for (int r = 0; r <= max_ring; ++r) {
    const int z0 = std::max(c[2] - r, 0), z1 = std::min(c[2] + r, dims_[2] - 1);
    const int y0 = std::max(c[1] - r, 0), y1 = std::min(c[1] + r, dims_[1] - 1);
    const int x0 = std::max(c[0] - r, 0), x1 = std::min(c[0] + r, dims_[0] - 1);
    for (int z = z0; z <= z1; ++z) {
      const bool z_shell = std::abs(z - c[2]) == r;
      for (int y = y0; y <= y1; ++y) {
        const bool shell = z_shell || std::abs(y - c[1]) == r;
        const std::size_t row = static_cast<std::size_t>(dims_[0]) * (y + static_cast<std::size_t>(dims_[1]) * z);
        if (shell) {
          for (int x = x0; x <= x1; ++x) scan_cell(row + x, p, best);
        } else {
          if (c[0] - r >= 0) scan_cell(row + (c[0] - r), p, best);
          if (r > 0 && c[0] + r < dims_[0]) scan_cell(row + (c[0] + r), p, best);
        }
      }
    }
    // Centers outside the visited box are at least `bound` away, so their
    // triangles are at least bound - max_radius away.
    double bound = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
      if (c[a] - r > 0) bound = std::min(bound, p[a] - (origin_[a] + (c[a] - r) * cell_size_));
      if (c[a] + r < dims_[a] - 1) bound = std::min(bound, origin_[a] + (c[a] + r + 1) * cell_size_ - p[a]);
    }
    if (bound == std::numeric_limits<double>::infinity()) break;
    if (bound - max_radius_ > best) break;
  }
  return best;
}

}  // namespace dexrecon
