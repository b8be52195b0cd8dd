#include "dexrecon/retarget/retarget.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dexrecon/error.hpp"

namespace dexrecon {

void HandKeypoints::validate() const {
  if (timestamps.size() != frames.size()) {
    fail(ErrorCode::DimensionMismatch, "hand keypoints: timestamp count differs from frame count");
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) {
      fail(ErrorCode::InvalidArgument, "hand keypoint timestamps must be strictly increasing");
    }
  }
}

void KeypointMapping::validate() const {
  std::set<std::size_t> covered;
  for (const Entry& e : entries) {
    if (!(e.weight >= 0.0)) fail(ErrorCode::InvalidArgument, "keypoint mapping weights must be nonnegative");
    if (e.keypoint >= kHandKeypointCount) fail(ErrorCode::InvalidArgument, "keypoint index out of range");
    if (e.weight > 0.0) covered.insert(e.keypoint);
  }
  const auto tips = std::count_if(kFingertipKeypoints.begin(), kFingertipKeypoints.end(),
                                  [&](std::size_t k) { return covered.count(k) > 0; });
  if (entries.size() < 4 || !covered.count(0) || tips < 3) {
    fail(ErrorCode::InvalidArgument, "keypoint mapping must cover the wrist and at least three fingertips");
  }
}

KeypointMapping default_mapping(const RobotModel& model, const std::vector<std::string>& fingertip_links,
                                const std::vector<std::pair<std::string, std::size_t>>& phalanx_links) {
  if (fingertip_links.size() > kFingertipKeypoints.size()) {
    fail(ErrorCode::InvalidArgument, "at most five fingertip links");
  }
  KeypointMapping mapping;
  mapping.entries.push_back({model.root_name(), Vec3::Zero(), 0, 1.0});
  for (std::size_t i = 0; i < fingertip_links.size(); ++i) {
    model.require_link(fingertip_links[i]);
    mapping.entries.push_back({fingertip_links[i], Vec3::Zero(), kFingertipKeypoints[i], 1.0});
  }
  for (const auto& [link, keypoint] : phalanx_links) {
    model.require_link(link);
    mapping.entries.push_back({link, Vec3::Zero(), keypoint, 0.5});
  }
  mapping.validate();
  return mapping;
}

PointIkProblem keypoint_problem(const RobotModel& model, const KeypointMapping& mapping, const HandPose& human,
                                std::optional<ConfigPrior> prior) {
  mapping.validate();
  std::vector<PointTarget> targets;
  targets.reserve(mapping.entries.size());
  for (const auto& e : mapping.entries) {
    targets.push_back({model.require_link(e.link), e.offset, human[e.keypoint], e.weight});
  }
  return PointIkProblem(model, std::move(targets), std::move(prior));
}

namespace {

double rms_keypoint_error(const RobotModel& model, const KeypointMapping& mapping, const HandPose& human,
                          const RobotConfig& q) {
  const KinematicState state = compute_kinematics(model, q);
  double sum = 0.0;
  for (const auto& e : mapping.entries) {
    sum += (state.link_poses[model.require_link(e.link)].apply(e.offset) - human[e.keypoint]).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(mapping.entries.size()));
}

RetargetResult solve(const RobotModel& model, const KeypointMapping& mapping, const HandPose& human,
                     const RobotConfig& q_init, const IkOptions& options, std::optional<ConfigPrior> prior) {
  const PointIkProblem problem = keypoint_problem(model, mapping, human, std::move(prior));
  IkResult ik = problem.solve(q_init, options);
  RetargetResult out;
  out.rms_error = rms_keypoint_error(model, mapping, human, ik.config);
  out.objective = ik.objective;
  out.iterations = ik.iterations;
  out.converged = ik.converged;
  out.config = std::move(ik.config);
  return out;
}

}  // namespace

RetargetResult retarget_frame(const RobotModel& model, const KeypointMapping& mapping, const HandPose& human,
                              const RobotConfig& q_init, const IkOptions& options) {
  return solve(model, mapping, human, q_init, options, std::nullopt);
}

TrajectoryRetarget retarget_trajectory(const RobotModel& model, const KeypointMapping& mapping,
                                       const HandKeypoints& human, double smoothness, const IkOptions& options) {
  human.validate();
  if (human.frames.empty()) fail(ErrorCode::InvalidArgument, "retargeting needs at least one frame");
  if (!(smoothness >= 0.0)) fail(ErrorCode::InvalidArgument, "smoothness must be >= 0");

  TrajectoryRetarget out;
  out.trajectory.joint_names = model.joint_names();
  RobotConfig init = model.zero_config();
  init.wrist = RigidTransform::from_translation(human.frames.front()[0]);
  for (std::size_t t = 0; t < human.frames.size(); ++t) {
    std::optional<ConfigPrior> prior;
    if (t > 0 && smoothness > 0.0) prior = ConfigPrior{init, smoothness};
    RetargetResult r = solve(model, mapping, human.frames[t], init, options, std::move(prior));
    init = r.config;
    out.trajectory.frames.push_back(TrajectoryFrame{human.timestamps[t], r.config, {}});
    out.report.push_back(std::move(r));
  }
  return out;
}

}  // namespace dexrecon
