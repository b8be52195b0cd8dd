#include <sstream>

#include "dexrecon/error.hpp"
#include "dexrecon/io/json_util.hpp"
#include "dexrecon/retarget/retarget.hpp"

namespace dexrecon {

HandKeypoints parse_hand_keypoints(const std::string& text) {
  HandKeypoints out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Json j = parse_json(line, "keypoints line " + std::to_string(line_no));
    if (!j.contains("t") || !j.contains("joints")) fail(ErrorCode::IoFormat, "keypoints record needs \"t\" and \"joints\"");
    const Json& joints = j.at("joints");
    if (!joints.is_array() || joints.size() != kHandKeypointCount) {
      fail(ErrorCode::IoFormat, "keypoints line " + std::to_string(line_no) + ": expected 21 joints");
    }
    HandPose pose;
    for (std::size_t k = 0; k < kHandKeypointCount; ++k) pose[k] = vec3_from_json(joints[k]);
    out.timestamps.push_back(j.at("t").get<double>());
    out.frames.push_back(pose);
  }
  try {
    out.validate();
  } catch (const Error& e) {
    fail(ErrorCode::IoFormat, e.what());
  }
  return out;
}

HandKeypoints read_hand_keypoints(const std::filesystem::path& path) {
  return parse_hand_keypoints(read_text_file(path));
}

std::string format_hand_keypoints(const HandKeypoints& keypoints) {
  std::string out;
  for (std::size_t t = 0; t < keypoints.frames.size(); ++t) {
    Json rec;
    rec["t"] = keypoints.timestamps[t];
    Json joints = Json::array();
    for (const Vec3& p : keypoints.frames[t]) joints.push_back(vec3_to_json(p));
    rec["joints"] = std::move(joints);
    out += rec.dump() + "\n";
  }
  return out;
}

KeypointMapping parse_keypoint_mapping(const std::string& text) {
  const Json j = parse_json(text, "keypoint mapping");
  KeypointMapping mapping;
  try {
    for (const Json& e : j.at("entries")) {
      KeypointMapping::Entry entry;
      entry.link = e.at("link").get<std::string>();
      if (e.contains("offset")) entry.offset = vec3_from_json(e.at("offset"));
      entry.keypoint = e.at("keypoint").get<std::size_t>();
      entry.weight = e.value("weight", 1.0);
      mapping.entries.push_back(std::move(entry));
    }
  } catch (const Json::exception& ex) {
    fail(ErrorCode::IoFormat, std::string("keypoint mapping: ") + ex.what());
  }
  mapping.validate();
  return mapping;
}

KeypointMapping read_keypoint_mapping(const std::filesystem::path& path) {
  return parse_keypoint_mapping(read_text_file(path));
}

std::string format_keypoint_mapping(const KeypointMapping& mapping) {
  Json entries = Json::array();
  for (const auto& e : mapping.entries) {
    Json rec;
    rec["link"] = e.link;
    rec["offset"] = vec3_to_json(e.offset);
    rec["keypoint"] = e.keypoint;
    rec["weight"] = e.weight;
    entries.push_back(std::move(rec));
  }
  Json j;
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

}  // namespace dexrecon
