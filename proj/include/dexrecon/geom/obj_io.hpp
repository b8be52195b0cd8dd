#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dexrecon/geom/mesh.hpp"

namespace dexrecon {

// Wavefront OBJ subset: `v x y z` and `f i j k ...` (1-based, negative indices
// relative to the end, `i/t/n` forms accepted). Polygons are fan-triangulated;
// texture coordinates, normals, groups and materials are ignored. A file with
// vertices but no faces parses to a mesh with no faces (a point set).
TriMesh parse_obj(std::string_view text);
TriMesh read_obj(const std::filesystem::path& path);

std::string format_obj(const TriMesh& mesh);
void write_obj(const std::filesystem::path& path, const TriMesh& mesh);

}  // namespace dexrecon
