#pragma once

#include "dexrecon/geom/mesh.hpp"

namespace dexrecon {

// Closed, outward-wound primitive meshes centered at the origin.

// Axis-aligned box with full extents `size`; every side is an s x s grid of
// quads sharing vertices along the edges.
TriMesh make_box(const Vec3& size, int subdivisions = 1);

// UV sphere with `stacks` latitude bands and `slices` longitude segments.
TriMesh make_uv_sphere(double radius, int stacks = 20, int slices = 20);

// Cylinder along z with fan-triangulated caps. `height_rings` is the number
// of bands along the side.
TriMesh make_cylinder(double radius, double length, int segments = 24, int height_rings = 1);

}  // namespace dexrecon
