#include "dexrecon/contact/contact.hpp"
#include "dexrecon/error.hpp"
#include "dexrecon/io/json_util.hpp"

namespace dexrecon {

std::string format_contact_map(const ContactMap& map) {
  Json j;
  j["c_rad"] = map.c_rad;
  j["values"] = map.values;
  return j.dump() + "\n";
}

ContactMap parse_contact_map(const std::string& text, std::optional<std::size_t> expected_size) {
  const Json j = parse_json(text, "contact map");
  if (!j.is_object() || !j.contains("c_rad") || !j.contains("values")) {
    fail(ErrorCode::IoFormat, "contact map needs \"c_rad\" and \"values\"");
  }
  ContactMap map;
  map.c_rad = doubles_from_json(Json::array({j.at("c_rad")})).front();
  map.values = doubles_from_json(j.at("values"));
  if (!(map.c_rad > 0.0)) fail(ErrorCode::NonPositiveRadius, "contact map c_rad must be positive");
  for (double v : map.values) {
    if (!(v >= 0.0 && v <= 1.0)) fail(ErrorCode::IoFormat, "contact map values must lie in [0, 1]");
  }
  if (expected_size && map.values.size() != *expected_size) {
    fail(ErrorCode::DimensionMismatch, "contact map has " + std::to_string(map.values.size()) +
                                           " values, mesh has " + std::to_string(*expected_size) + " vertices");
  }
  return map;
}

ContactMap read_contact_map(const std::filesystem::path& path, std::optional<std::size_t> expected_size) {
  return parse_contact_map(read_text_file(path), expected_size);
}

void write_contact_map(const std::filesystem::path& path, const ContactMap& map) {
  write_text_file(path, format_contact_map(map));
}

}  // namespace dexrecon
