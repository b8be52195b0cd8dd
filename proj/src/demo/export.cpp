#include <cstdio>

#include "dexrecon/demo/demo.hpp"
#include "dexrecon/error.hpp"
#include "dexrecon/geom/sampling.hpp"
#include "dexrecon/io/json_util.hpp"
#include "dexrecon/robot/config_space.hpp"

namespace dexrecon {

namespace {

Json flat_points(const std::vector<Vec3>& points) {
  Json out = Json::array();
  for (const Vec3& p : points) {
    out.push_back(p.x());
    out.push_back(p.y());
    out.push_back(p.z());
  }
  return out;
}

}  // namespace

TrainingSample make_training_sample(const Trajectory& traj, const RobotModel& model, const TriMesh& object,
                                    const std::string& object_id, std::size_t n_points, std::uint64_t seed) {
  traj.validate();
  if (!traj.marked()) fail(ErrorCode::UnmarkedTrajectory, "export needs stage-marked trajectories");
  const std::size_t t2 = *traj.t2;
  const TrajectoryFrame& grasp = traj.frames[t2];
  const auto it = grasp.objects.find(object_id);
  if (it == grasp.objects.end()) fail(ErrorCode::MissingPose, "object pose unknown at t2");

  TrainingSample sample;
  sample.start_frame = t2;
  sample.q_grasp = grasp.config;
  sample.robot_points = RobotPointSampler(model, n_points, seed).at(grasp.config).points;
  sample.object_points = transformed(sample_surface(object, n_points, seed).points, it->second);
  for (std::size_t t = t2; t + 1 < traj.size(); ++t) {
    sample.actions.push_back(config_difference(traj.frames[t + 1].config, traj.frames[t].config));
  }
  return sample;
}

std::string format_observation(const TrainingSample& sample, const std::vector<std::string>& joint_names) {
  Json j;
  j["start_frame"] = sample.start_frame;
  j["robot_points"] = flat_points(sample.robot_points);
  j["object_points"] = flat_points(sample.object_points);
  j["q_grasp"] = {{"wrist", transform_to_json(sample.q_grasp.wrist)},
                  {"joint_names", joint_names},
                  {"joints", sample.q_grasp.joint_angles}};
  return j.dump() + "\n";
}

std::string format_actions(const TrainingSample& sample, const std::vector<std::string>& joint_names) {
  Json j;
  j["convention"] =
      "dq = [translation delta (m, world), rotation vector of R_next * R^T (rad, world), joint deltas]";
  j["joint_names"] = joint_names;
  j["start_frame"] = sample.start_frame;
  Json actions = Json::array();
  for (const Eigen::VectorXd& a : sample.actions) actions.push_back(std::vector<double>(a.data(), a.data() + a.size()));
  j["actions"] = std::move(actions);
  return j.dump() + "\n";
}

std::vector<Eigen::VectorXd> parse_actions(const std::string& text) {
  const Json j = parse_json(text, "actions");
  std::vector<Eigen::VectorXd> out;
  if (!j.contains("actions")) fail(ErrorCode::IoFormat, "actions file has no \"actions\" list");
  for (const Json& a : j.at("actions")) {
    const std::vector<double> v = doubles_from_json(a);
    out.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  return out;
}

std::vector<TrainingSample> export_training_set(const std::vector<Trajectory>& trajs, const RobotModel& model,
                                                const TriMesh& object, const std::string& object_id,
                                                std::size_t n_points, std::uint64_t seed,
                                                const std::filesystem::path& out_dir) {
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    if (!trajs[i].marked()) fail(ErrorCode::UnmarkedTrajectory, "trajectory " + std::to_string(i) + " is not stage-marked");
  }
  std::vector<TrainingSample> samples;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    samples.push_back(make_training_sample(trajs[i], model, object, object_id, n_points, seed));
    char name[32];
    std::snprintf(name, sizeof name, "traj_%04zu", i);
    const auto dir = out_dir / name;
    write_text_file(dir / "obs.json", format_observation(samples.back(), trajs[i].joint_names));
    write_text_file(dir / "actions.json", format_actions(samples.back(), trajs[i].joint_names));
  }
  return samples;
}

}  // namespace dexrecon
