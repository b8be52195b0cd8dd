#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dexrecon/robot/model.hpp"

namespace dexrecon {

struct TrajectoryFrame {
  double time = 0.0;
  RobotConfig config;
  std::map<std::string, RigidTransform> objects;
};

/// Time-indexed robot configurations with per-object poses. `t1`/`t2` mark
/// the start of the grasp stage and the moment the grasp is established.
struct Trajectory {
  std::vector<std::string> joint_names;
  std::vector<TrajectoryFrame> frames;
  std::optional<std::size_t> t1;
  std::optional<std::size_t> t2;

  std::size_t size() const { return frames.size(); }
  bool marked() const { return t1.has_value() && t2.has_value(); }

  // Strictly increasing timestamps, consistent joint counts, and
  // 0 <= t1 <= t2 < size() when marks are set.
  void validate() const;
};

// JSON-lines trajectory file. Line 1 is a header:
//   {"format":"dexrecon-trajectory","version":1,"joints":[...],"t1":i|null,"t2":i|null,
//    "quaternion":"wxyz"}
// followed by one record per frame:
//   {"t":s,"wrist":{"q":[w,x,y,z],"t":[x,y,z]},"joints":[...],"objects":{id:{"q":[...],"t":[...]}}}
std::string format_trajectory(const Trajectory& traj);
Trajectory parse_trajectory(const std::string& text);
Trajectory read_trajectory(const std::filesystem::path& path);
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);

}  // namespace dexrecon
