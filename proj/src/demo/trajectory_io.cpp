#include <sstream>

#include "dexrecon/demo/trajectory.hpp"
#include "dexrecon/error.hpp"
#include "dexrecon/io/json_util.hpp"

namespace dexrecon {

namespace {

constexpr const char* kFormat = "dexrecon-trajectory";

Json optional_index(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<std::size_t> index_from_json(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number_unsigned()) fail(ErrorCode::IoFormat, std::string("trajectory header: bad ") + key);
  return j.at(key).get<std::size_t>();
}

}  // namespace

std::string format_trajectory(const Trajectory& traj) {
  traj.validate();
  std::string out;
  Json header;
  header["format"] = kFormat;
  header["version"] = 1;
  header["joints"] = traj.joint_names;
  header["t1"] = optional_index(traj.t1);
  header["t2"] = optional_index(traj.t2);
  header["quaternion"] = "wxyz";
  out += header.dump() + "\n";
  for (const TrajectoryFrame& frame : traj.frames) {
    Json rec;
    rec["t"] = frame.time;
    rec["wrist"] = transform_to_json(frame.config.wrist);
    rec["joints"] = frame.config.joint_angles;
    Json objects = Json::object();
    for (const auto& [id, pose] : frame.objects) objects[id] = transform_to_json(pose);
    rec["objects"] = std::move(objects);
    out += rec.dump() + "\n";
  }
  return out;
}

Trajectory parse_trajectory(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Trajectory traj;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Json j = parse_json(line, "trajectory line " + std::to_string(line_no));
    try {
      if (!have_header) {
        if (j.value("format", std::string()) != kFormat) fail(ErrorCode::IoFormat, "not a trajectory file (bad header)");
        traj.joint_names = j.at("joints").get<std::vector<std::string>>();
        traj.t1 = index_from_json(j, "t1");
        traj.t2 = index_from_json(j, "t2");
        have_header = true;
        continue;
      }
      TrajectoryFrame frame;
      frame.time = j.at("t").get<double>();
      frame.config.wrist = transform_from_json(j.at("wrist"));
      frame.config.joint_angles = doubles_from_json(j.at("joints"));
      if (j.contains("objects")) {
        for (const auto& [id, pose] : j.at("objects").items()) frame.objects.emplace(id, transform_from_json(pose));
      }
      traj.frames.push_back(std::move(frame));
    } catch (const Json::exception& e) {
      fail(ErrorCode::IoFormat, "trajectory line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) fail(ErrorCode::IoFormat, "trajectory file is empty");
  try {
    traj.validate();
  } catch (const Error& e) {
    fail(ErrorCode::IoFormat, std::string("invalid trajectory: ") + e.what());
  }
  return traj;
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  return parse_trajectory(read_text_file(path));
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  write_text_file(path, format_trajectory(traj));
}

}  // namespace dexrecon
