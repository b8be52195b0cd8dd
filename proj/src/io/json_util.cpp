#include "dexrecon/io/json_util.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dexrecon/error.hpp"

namespace dexrecon {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) fail(ErrorCode::InvalidArgument, "cannot format number");
  return std::string(buf, ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::IoMissing, "missing input file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoMissing, "cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoFormat, "cannot write: " + path.string());
  out << text;
  if (!out) fail(ErrorCode::IoFormat, "write failed: " + path.string());
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::IoFormat, what + ": " + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  return parse_json(read_text_file(path), path.string());
}

Json vec3_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) fail(ErrorCode::IoFormat, "expected a 3-element array");
  try {
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  } catch (const Json::exception& e) {
    fail(ErrorCode::IoFormat, std::string("bad vector: ") + e.what());
  }
}

Json transform_to_json(const RigidTransform& T) {
  const Quat& q = T.rotation();
  Json j;
  j["q"] = Json::array({q.w(), q.x(), q.y(), q.z()});
  j["t"] = vec3_to_json(T.translation());
  return j;
}

RigidTransform transform_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("q") || !j.contains("t")) {
    fail(ErrorCode::IoFormat, "transform needs \"q\" and \"t\"");
  }
  const Json& q = j.at("q");
  if (!q.is_array() || q.size() != 4) fail(ErrorCode::IoFormat, "quaternion must be [w,x,y,z]");
  try {
    const Quat quat(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>());
    if (!(quat.norm() > 0.0)) fail(ErrorCode::IoFormat, "zero quaternion");
    return RigidTransform(quat, vec3_from_json(j.at("t")));
  } catch (const Json::exception& e) {
    fail(ErrorCode::IoFormat, std::string("bad transform: ") + e.what());
  }
}

std::vector<double> doubles_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::IoFormat, "expected a numeric array");
  std::vector<double> out;
  out.reserve(j.size());
  try {
    for (const Json& v : j) out.push_back(v.get<double>());
  } catch (const Json::exception& e) {
    fail(ErrorCode::IoFormat, std::string("bad number: ") + e.what());
  }
  return out;
}

void append_f32_le(std::string& out, float value) {
  const auto bits = std::bit_cast<std::uint32_t>(value);
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((bits >> (8 * k)) & 0xFFu));
}

float read_f32_le(const unsigned char* bytes) {
  std::uint32_t bits = 0;
  for (int k = 0; k < 4; ++k) bits |= static_cast<std::uint32_t>(bytes[k]) << (8 * k);
  return std::bit_cast<float>(bits);
}

}  // namespace dexrecon
