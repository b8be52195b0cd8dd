#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "dexrecon/demo/trajectory.hpp"
#include "dexrecon/robot/kinematics.hpp"

namespace dexrecon {

using SceneMeshes = std::map<std::string, TriMesh>;

struct SegmentOptions {
  double d_approach = 0.02;
  double contact_eps = 0.002;
  double motion_eps = 0.005;
  std::vector<std::string> fingertip_links;  // empty = leaf links
};

struct StageMarks {
  std::size_t t1 = 0;
  std::size_t t2 = 0;
};

// Per-frame exact distance from each fingertip link's mesh vertices to the
// object surface (rows: frames, columns: fingertip links in `links` order).
std::vector<std::vector<double>> fingertip_distances(const Trajectory& traj, const std::string& object_id,
                                                     const TriMesh& object, const RobotModel& model,
                                                     const std::vector<std::size_t>& links);

// Largest displacement of any object vertex between frame t and t + 1.
double object_motion(const Trajectory& traj, const std::string& object_id, const TriMesh& object, std::size_t t);

// t1: first frame whose fingertips come within d_approach of the object.
// t2: first frame >= t1 with at least two fingertip links within
// contact_eps whose object moves by more than motion_eps over the next
// frame; otherwise the last frame with two such links.
StageMarks segment_stages(const Trajectory& traj, const std::string& object_id, const TriMesh& object,
                          const RobotModel& model, const SegmentOptions& options = {});

struct SynthesisSpec {
  std::string target_object;
  double x_min = -0.2, x_max = 0.2;
  double y_min = -0.2, y_max = 0.2;
  double yaw_min = -std::numbers::pi / 4, yaw_max = std::numbers::pi / 4;
  bool full_rotation = false;  // uniform SO(3) instead of yaw
  bool identity = false;       // every sample is the identity transform
  std::size_t count = 1;
  std::uint64_t seed = 0;
  std::string method = "interpolate";
  double d_approach = 0.02;    // interaction range is 3 * d_approach
  double clearance = 0.01;     // minimum wrist-to-scene distance in regenerated frames
  int max_retries = 100;       // rejected draws allowed per sample

  void validate() const;
};

// First and last frame with the whole hand within `range` of the object.
std::pair<std::size_t, std::size_t> skill_segment(const Trajectory& traj, const std::string& object_id,
                                                  const TriMesh& object, const RobotModel& model, double range);

// Rigid transform for one sample: a rotation about the target object's
// position in frame 0, then a horizontal translation, so the object's
// displacement is exactly the sampled (x, y).
RigidTransform sample_scene_transform(const SynthesisSpec& spec, const Vec3& pivot, std::uint64_t seed,
                                      int attempt);

// Applies T to the skill segment [first, last] (wrist and target object) and
// to the target object in every frame, then regenerates the frames before
// and after the segment by interpolation from/to the unchanged endpoints.
Trajectory transform_demo(const Trajectory& source, const std::string& target, std::size_t first, std::size_t last,
                          const RigidTransform& T);

struct SynthesisResult {
  std::vector<Trajectory> trajectories;
  std::vector<RigidTransform> transforms;
  std::vector<int> rejected;  // rejected draws per sample
};

SynthesisResult synthesize(const Trajectory& source, const SynthesisSpec& spec, const SceneMeshes& scene,
                           const RobotModel& model);

// Frames after t2: object = wrist(t) * wrist(t2)^-1 * object(t2).
Trajectory propagate_object_by_grasp(const Trajectory& traj, const std::string& object_id, std::size_t t2);

struct TrainingSample {
  std::vector<Vec3> robot_points;
  std::vector<Vec3> object_points;
  RobotConfig q_grasp;
  std::size_t start_frame = 0;
  std::vector<Eigen::VectorXd> actions;  // q_{t+1} "minus" q_t for t >= t2
};

// Action convention: [translation delta (3), rotation vector of
// R_{t+1} R_t^T (3), joint deltas]. Integrate with retract().
TrainingSample make_training_sample(const Trajectory& traj, const RobotModel& model, const TriMesh& object,
                                    const std::string& object_id, std::size_t n_points, std::uint64_t seed);

// One directory per trajectory (traj_0000, ...) holding obs.json and
// actions.json.
std::vector<TrainingSample> export_training_set(const std::vector<Trajectory>& trajs, const RobotModel& model,
                                                const TriMesh& object, const std::string& object_id,
                                                std::size_t n_points, std::uint64_t seed,
                                                const std::filesystem::path& out_dir);

std::string format_observation(const TrainingSample& sample, const std::vector<std::string>& joint_names);
std::string format_actions(const TrainingSample& sample, const std::vector<std::string>& joint_names);
std::vector<Eigen::VectorXd> parse_actions(const std::string& text);

}  // namespace dexrecon
