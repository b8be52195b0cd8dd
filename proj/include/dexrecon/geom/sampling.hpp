#pragma once

#include <cstdint>

#include "dexrecon/geom/mesh.hpp"

namespace dexrecon {

/// Uniform surface sampling: faces are chosen by inverting the cumulative
/// area table, then a point is drawn uniformly inside the triangle
/// (square-root barycentric warp). Deterministic for a fixed seed.
PointCloud sample_surface(const TriMesh& mesh, std::size_t n, std::uint64_t seed);

}  // namespace dexrecon
