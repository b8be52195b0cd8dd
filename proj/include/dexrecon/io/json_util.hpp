#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dexrecon/geom/transform.hpp"

namespace dexrecon {

using Json = nlohmann::ordered_json;

// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
Json read_json_file(const std::filesystem::path& path);
Json parse_json(const std::string& text, const std::string& what);

Json vec3_to_json(const Vec3& v);
Vec3 vec3_from_json(const Json& j);

// {"q": [w, x, y, z], "t": [x, y, z]}
Json transform_to_json(const RigidTransform& T);
RigidTransform transform_from_json(const Json& j);

std::vector<double> doubles_from_json(const Json& j);

// Little-endian float32 payloads for the binary grid formats.
void append_f32_le(std::string& out, float value);
float read_f32_le(const unsigned char* bytes);

}  // namespace dexrecon
