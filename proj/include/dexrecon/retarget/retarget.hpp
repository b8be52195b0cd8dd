#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "dexrecon/demo/trajectory.hpp"
#include "dexrecon/robot/point_ik.hpp"

namespace dexrecon {

inline constexpr std::size_t kHandKeypointCount = 21;
// Keypoint layout: 0 = wrist, then four per finger (base to tip) for
// thumb, index, middle, ring, little. Tips are 4, 8, 12, 16, 20.
inline constexpr std::array<std::size_t, 5> kFingertipKeypoints{4, 8, 12, 16, 20};

using HandPose = std::array<Vec3, kHandKeypointCount>;

struct HandKeypoints {
  std::vector<double> timestamps;
  std::vector<HandPose> frames;

  void validate() const;
};

struct KeypointMapping {
  struct Entry {
    std::string link;
    Vec3 offset = Vec3::Zero();  // in the link frame
    std::size_t keypoint = 0;
    double weight = 1.0;
  };
  std::vector<Entry> entries;

  // Nonnegative weights, keypoints < 21, and at least the wrist plus three
  // fingertips covered.
  void validate() const;
};

// Root link <-> wrist keypoint, fingertip_links[i] <-> tip keypoint of finger
// i (weight 1), plus optional (link, keypoint) pairs for intermediate
// phalanges at weight 0.5.
KeypointMapping default_mapping(const RobotModel& model, const std::vector<std::string>& fingertip_links,
                                const std::vector<std::pair<std::string, std::size_t>>& phalanx_links = {});

struct RetargetResult {
  RobotConfig config;
  double objective = 0.0;   // weighted squared keypoint error
  double rms_error = 0.0;   // unweighted RMS keypoint distance, meters
  int iterations = 0;
  bool converged = false;
};

PointIkProblem keypoint_problem(const RobotModel& model, const KeypointMapping& mapping, const HandPose& human,
                                std::optional<ConfigPrior> prior = std::nullopt);

RetargetResult retarget_frame(const RobotModel& model, const KeypointMapping& mapping, const HandPose& human,
                              const RobotConfig& q_init, const IkOptions& options = {});

struct TrajectoryRetarget {
  Trajectory trajectory;
  std::vector<RetargetResult> report;  // one per frame
};

// Frame 0 starts from the zero configuration with the wrist placed on the
// human wrist keypoint; frame t starts from the frame t-1 solution. With
// smoothness > 0 the term smoothness * |q_t - q_{t-1}|^2 joins the objective.
TrajectoryRetarget retarget_trajectory(const RobotModel& model, const KeypointMapping& mapping,
                                       const HandKeypoints& human, double smoothness,
                                       const IkOptions& options = {});

// {"t": seconds, "joints": [[x,y,z] x 21]} per line.
HandKeypoints parse_hand_keypoints(const std::string& text);
HandKeypoints read_hand_keypoints(const std::filesystem::path& path);
std::string format_hand_keypoints(const HandKeypoints& keypoints);

// {"entries": [{"link": name, "offset": [x,y,z], "keypoint": i, "weight": w}, ...]}
KeypointMapping parse_keypoint_mapping(const std::string& text);
KeypointMapping read_keypoint_mapping(const std::filesystem::path& path);
std::string format_keypoint_mapping(const KeypointMapping& mapping);

}  // namespace dexrecon
