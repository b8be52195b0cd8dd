#include "dexrecon/geom/primitives.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "dexrecon/error.hpp"

namespace dexrecon {

TriMesh make_box(const Vec3& size, int subdivisions) {
  if (subdivisions < 1) fail(ErrorCode::InvalidArgument, "box subdivisions must be >= 1");
  if ((size.array() <= 0.0).any()) fail(ErrorCode::InvalidArgument, "box size must be positive");
  const int s = subdivisions;
  std::map<std::array<int, 3>, std::uint32_t> index_of;
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  auto vertex = [&](const std::array<int, 3>& lattice) {
    auto [it, inserted] = index_of.try_emplace(lattice, static_cast<std::uint32_t>(vertices.size()));
    if (inserted) {
      Vec3 p;
      for (int a = 0; a < 3; ++a) p[a] = size[a] * (static_cast<double>(lattice[a]) / s - 0.5);
      vertices.push_back(p);
    }
    return it->second;
  };

  // (normal axis, sign, u axis, v axis) with u x v = sign * e_axis.
  constexpr int sides[6][4] = {{0, 1, 1, 2}, {0, -1, 2, 1}, {1, 1, 2, 0},
                               {1, -1, 0, 2}, {2, 1, 0, 1}, {2, -1, 1, 0}};
  for (const auto& side : sides) {
    const int axis = side[0], u = side[2], v = side[3];
    const int fixed = side[1] > 0 ? s : 0;
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        auto corner = [&](int di, int dj) {
          std::array<int, 3> l{};
          l[axis] = fixed;
          l[u] = i + di;
          l[v] = j + dj;
          return vertex(l);
        };
        const auto a = corner(0, 0), b = corner(1, 0), c = corner(1, 1), d = corner(0, 1);
        faces.push_back({a, b, c});
        faces.push_back({a, c, d});
      }
    }
  }
  return TriMesh(std::move(vertices), std::move(faces));
}

TriMesh make_uv_sphere(double radius, int stacks, int slices) {
  if (radius <= 0.0 || stacks < 2 || slices < 3) {
    fail(ErrorCode::InvalidArgument, "invalid sphere tessellation parameters");
  }
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  vertices.emplace_back(0.0, 0.0, radius);
  for (int k = 1; k < stacks; ++k) {
    const double theta = std::numbers::pi * k / stacks;
    for (int j = 0; j < slices; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / slices;
      vertices.emplace_back(radius * std::sin(theta) * std::cos(phi),
                            radius * std::sin(theta) * std::sin(phi), radius * std::cos(theta));
    }
  }
  vertices.emplace_back(0.0, 0.0, -radius);
  const auto south = static_cast<std::uint32_t>(vertices.size() - 1);
  auto ring = [&](int k, int j) {
    return static_cast<std::uint32_t>(1 + (k - 1) * slices + (j % slices));
  };
  for (int j = 0; j < slices; ++j) faces.push_back({0, ring(1, j), ring(1, j + 1)});
  for (int k = 1; k + 1 < stacks; ++k) {
    for (int j = 0; j < slices; ++j) {
      const auto a = ring(k, j), b = ring(k, j + 1), c = ring(k + 1, j), d = ring(k + 1, j + 1);
      faces.push_back({a, c, d});
      faces.push_back({a, d, b});
    }
  }
  for (int j = 0; j < slices; ++j) faces.push_back({south, ring(stacks - 1, j + 1), ring(stacks - 1, j)});
  return TriMesh(std::move(vertices), std::move(faces));
}

TriMesh make_cylinder(double radius, double length, int segments, int height_rings) {
  if (radius <= 0.0 || length <= 0.0 || segments < 3 || height_rings < 1) {
    fail(ErrorCode::InvalidArgument, "invalid cylinder tessellation parameters");
  }
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  for (int k = 0; k <= height_rings; ++k) {
    const double z = -0.5 * length + length * k / height_rings;
    for (int j = 0; j < segments; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / segments;
      vertices.emplace_back(radius * std::cos(phi), radius * std::sin(phi), z);
    }
  }
  auto ring = [&](int k, int j) { return static_cast<std::uint32_t>(k * segments + (j % segments)); };
  for (int k = 0; k < height_rings; ++k) {
    for (int j = 0; j < segments; ++j) {
      const auto a = ring(k, j), b = ring(k, j + 1), c = ring(k + 1, j), d = ring(k + 1, j + 1);
      faces.push_back({a, b, d});
      faces.push_back({a, d, c});
    }
  }
  const auto bottom = static_cast<std::uint32_t>(vertices.size());
  vertices.emplace_back(0.0, 0.0, -0.5 * length);
  const auto top = static_cast<std::uint32_t>(vertices.size());
  vertices.emplace_back(0.0, 0.0, 0.5 * length);
  for (int j = 0; j < segments; ++j) {
    faces.push_back({top, ring(height_rings, j), ring(height_rings, j + 1)});
    faces.push_back({bottom, ring(0, j + 1), ring(0, j)});
  }
  return TriMesh(std::move(vertices), std::move(faces));
}

}  // namespace dexrecon
