#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "dexrecon/robot/model.hpp"

namespace dexrecon {

/// Parse the supported URDF subset: links with box/sphere/cylinder/mesh
/// geometry (collision preferred over visual), and revolute, continuous,
/// prismatic and fixed joints. Mesh filenames resolve against `base_dir`
/// (a leading package:// or file:// is stripped); only OBJ meshes load.
/// Transmissions, gazebo blocks and mimic tags are skipped with a warning.
RobotModel parse_urdf(std::string_view text,
                      const std::optional<std::filesystem::path>& base_dir = std::nullopt);
RobotModel load_urdf(const std::filesystem::path& path);

// Serialize back to URDF (all geometry written as <collision>).
std::string format_urdf(const RobotModel& model, const std::string& robot_name = "robot");

}  // namespace dexrecon
