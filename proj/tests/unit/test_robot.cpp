#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dexrecon/error.hpp"
#include "dexrecon/robot/config_space.hpp"
#include "dexrecon/robot/kinematics.hpp"
#include "dexrecon/robot/point_ik.hpp"
#include "dexrecon/robot/urdf.hpp"
#include "fixtures.hpp"

using namespace dexrecon;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

RobotConfig with_joints(const RobotModel& model, std::vector<double> joints) {
  RobotConfig q = model.zero_config();
  q.joint_angles = std::move(joints);
  return q;
}

Eigen::VectorXd random_tangent(Rng& rng, std::size_t n, double scale) {
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = rng.uniform(-scale, scale);
  return d;
}

}  // namespace

TEST(Urdf, TwoLinkForwardKinematics) {
  const RobotModel model = parse_urdf(fixtures::two_link_urdf());
  EXPECT_EQ(model.dof(), 2u);
  EXPECT_EQ(model.root_name(), "base");
  const auto fk = forward_kinematics(model, with_joints(model, {std::numbers::pi / 2, -std::numbers::pi / 2}));
  EXPECT_LT((fk.at("tip").translation() - Vec3(1, 1, 0)).norm(), 1e-12);
  EXPECT_LT((fk.at("link2").translation() - Vec3(0, 1, 0)).norm(), 1e-12);
}

TEST(Urdf, HandStructure) {
  const RobotModel hand = fixtures::hand_model();
  EXPECT_EQ(hand.dof(), 16u);
  EXPECT_EQ(hand.leaf_links().size(), 4u);
  EXPECT_TRUE(hand.geometry_complete());
  EXPECT_TRUE(hand.warnings().empty());
}

TEST(Urdf, FormatRoundTrip) {
  const RobotModel hand = fixtures::hand_model();
  const RobotModel back = parse_urdf(format_urdf(hand));
  Rng rng(5);
  RobotConfig q = hand.zero_config();
  q.joint_angles = fixtures::random_joints(hand, rng);
  q.wrist = fixtures::random_transform(rng);
  const auto a = forward_kinematics(hand, q);
  const auto b = forward_kinematics(back, q);
  for (const auto& [name, pose] : a) EXPECT_LT((pose.translation() - b.at(name).translation()).norm(), 1e-12);
}

TEST(Urdf, StructuralErrors) {
  EXPECT_EQ(code_of([] { parse_urdf("<robot><link name='a'></robot>"); }), ErrorCode::MalformedXml);
  EXPECT_EQ(code_of([] {
              parse_urdf(R"(<robot><link name="a"/><joint name="j" type="fixed"><parent link="a"/>
                 <child link="b"/></joint></robot>)");
            }),
            ErrorCode::MissingLink);
  EXPECT_EQ(code_of([] {
              parse_urdf(R"(<robot><link name="a"/><link name="b"/>
                 <joint name="j1" type="fixed"><parent link="a"/><child link="b"/></joint>
                 <joint name="j2" type="fixed"><parent link="b"/><child link="a"/></joint></robot>)");
            }),
            ErrorCode::CyclicKinematics);
  EXPECT_EQ(code_of([] {
              parse_urdf(R"(<robot><link name="a"/><link name="b"/>
                 <joint name="j" type="revolute"><parent link="a"/><child link="b"/><axis xyz="0 0 0"/>
                 <limit lower="0" upper="1"/></joint></robot>)");
            }),
            ErrorCode::NonUnitAxis);
}

TEST(Urdf, UnsupportedElementsWarn) {
  const RobotModel m = parse_urdf(R"(<robot><link name="a"/><link name="b"/>
      <joint name="j" type="continuous"><parent link="a"/><child link="b"/><axis xyz="0 0 2"/></joint>
      <transmission name="t"/></robot>)");
  EXPECT_FALSE(m.warnings().empty());
  EXPECT_FALSE(m.joints()[0].limited());
  EXPECT_NEAR(m.joints()[0].axis.norm(), 1.0, 1e-15);
}

TEST(Kinematics, DimensionMismatchThrows) {
  const RobotModel model = parse_urdf(fixtures::two_link_urdf());
  EXPECT_EQ(code_of([&] { forward_kinematics(model, with_joints(model, {0.0})); }), ErrorCode::DimensionMismatch);
}

TEST(Kinematics, OutOfLimitWarns) {
  const RobotModel model = parse_urdf(fixtures::two_link_urdf());
  std::vector<std::string> warnings;
  forward_kinematics(model, with_joints(model, {4.0, 0.0}), &warnings);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Kinematics, WristPoseCommutes) {
  const RobotModel hand = fixtures::hand_model();
  Rng rng(6);
  RobotConfig q = hand.zero_config();
  q.joint_angles = fixtures::random_joints(hand, rng);
  const auto local = forward_kinematics(hand, q);
  q.wrist = fixtures::random_transform(rng);
  const auto world = forward_kinematics(hand, q);
  for (const auto& [name, pose] : local)
    EXPECT_LT(((q.wrist * pose).translation() - world.at(name).translation()).norm(), 1e-12);
}

TEST(Kinematics, SamplerPointsFollowLinks) {
  const RobotModel hand = fixtures::hand_model();
  const RobotPointSampler sampler(hand, 512, 3);
  EXPECT_EQ(sampler.size(), 512u);
  std::size_t total = 0;
  for (std::size_t c : sampler.link_counts()) total += c;
  EXPECT_EQ(total, 512u);
  Rng rng(7);
  RobotConfig q = hand.zero_config();
  q.joint_angles = fixtures::random_joints(hand, rng);
  q.wrist = fixtures::random_transform(rng);
  const PointCloud pc = sampler.at(q);
  const KinematicState state = compute_kinematics(hand, q);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const RigidTransform& pose = state.link_poses[sampler.point_links()[i]];
    EXPECT_LT((pose.apply(sampler.local_points()[i]) - pc.points[i]).norm(), 1e-12);
  }
}

TEST(ConfigSpace, RetractDifferenceRoundTrip) {
  const RobotModel hand = fixtures::hand_model();
  Rng rng(8);
  for (int k = 0; k < 50; ++k) {
    RobotConfig q = hand.zero_config();
    q.joint_angles = fixtures::random_joints(hand, rng);
    q.wrist = fixtures::random_transform(rng);
    const Eigen::VectorXd d = random_tangent(rng, 6 + hand.dof(), 0.5);
    const RobotConfig r = retract(q, d);
    EXPECT_LT((config_difference(r, q) - d).norm(), 1e-12);
  }
}

TEST(PointIk, GradientMatchesFiniteDifferences) {
  const RobotModel hand = fixtures::hand_model();
  Rng rng(9);
  RobotConfig q_true = hand.zero_config();
  q_true.joint_angles = fixtures::random_joints(hand, rng);
  std::vector<PointTarget> targets;
  const KinematicState st = compute_kinematics(hand, q_true);
  for (const std::string& tip : fixtures::hand_tip_links()) {
    const std::size_t link = hand.require_link(tip);
    targets.push_back({link, Vec3(0.001, 0.002, 0.003), st.link_poses[link].apply(Vec3(0.001, 0.002, 0.003)), 1.0});
  }
  const PointIkProblem problem(hand, targets);
  RobotConfig q = hand.zero_config();
  q.joint_angles = fixtures::random_joints(hand, rng);
  q.wrist = fixtures::random_transform(rng, 0.05);
  const Eigen::VectorXd g = problem.gradient(q);
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(g.size());
    e[i] = h;
    const double fd = (problem.objective(retract(q, e)) - problem.objective(retract(q, -e))) / (2 * h);
    EXPECT_NEAR(g[i], fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(PointIk, TwoLinkReachesTarget) {
  const RobotModel model = parse_urdf(fixtures::two_link_urdf());
  const std::size_t tip = model.require_link("tip");
  std::vector<PointTarget> targets{{tip, Vec3::Zero(), Vec3(1, 1, 0), 1.0}};
  const PointIkProblem problem(model, targets);
  // Pin the wrist by matching the base too.
  targets.push_back({model.require_link("base"), Vec3::Zero(), Vec3::Zero(), 1.0});
  targets.push_back({model.require_link("base"), Vec3(0, 0, 1), Vec3(0, 0, 1), 1.0});
  targets.push_back({model.require_link("base"), Vec3(1, 0, 0), Vec3(1, 0, 0), 1.0});
  const PointIkProblem pinned(model, targets);
  const IkResult r = pinned.solve(with_joints(model, {0.3, -0.3}));
  EXPECT_LT(r.objective, 1e-16);
  const auto fk = forward_kinematics(model, r.config);
  EXPECT_LT((fk.at("tip").translation() - Vec3(1, 1, 0)).norm(), 1e-8);
  EXPECT_LE(r.objective, r.initial_objective);
}

TEST(Retarget, MappingValidation) {
  const RobotModel hand = fixtures::hand_model();
  KeypointMapping m = fixtures::hand_mapping(hand);
  EXPECT_NO_THROW(m.validate());
  EXPECT_EQ(m.entries.front().keypoint, 0u);
  KeypointMapping few{{m.entries[0], m.entries[1]}};
  EXPECT_THROW(few.validate(), Error);
  m.entries[1].weight = -1.0;
  EXPECT_THROW(m.validate(), Error);
  EXPECT_THROW(default_mapping(hand, {"nope", "thumb_tip", "index_tip"}), Error);
}

TEST(Retarget, SingleFrameRecovery) {
  const RobotModel hand = fixtures::hand_model();
  const KeypointMapping mapping = fixtures::hand_mapping(hand);
  Rng rng(10);
  RobotConfig q_true = hand.zero_config();
  q_true.joint_angles = fixtures::random_joints(hand, rng, 0.5);
  q_true.wrist = RigidTransform::from_rotation_vector(Vec3(0.1, -0.2, 0.15), Vec3(0.1, 0.0, 0.3));
  RobotConfig init = hand.zero_config();
  init.wrist = RigidTransform::from_translation(q_true.wrist.translation());
  init.joint_angles = q_true.joint_angles;
  for (double& a : init.joint_angles) a += 0.1;
  const RetargetResult r = retarget_frame(hand, mapping, fixtures::keypoints_at(hand, q_true), init);
  EXPECT_LT(r.rms_error, 1e-7);
  for (std::size_t k = 0; k < hand.dof(); ++k) EXPECT_NEAR(r.config.joint_angles[k], q_true.joint_angles[k], 1e-5);
}

TEST(Retarget, KeypointsRoundTrip) {
  const RobotModel hand = fixtures::hand_model();
  HandKeypoints kp;
  kp.timestamps = {0.0, 0.1};
  kp.frames = {fixtures::keypoints_at(hand, hand.zero_config()), fixtures::keypoints_at(hand, fixtures::pinch_config(hand))};
  const HandKeypoints back = parse_hand_keypoints(format_hand_keypoints(kp));
  ASSERT_EQ(back.frames.size(), 2u);
  for (std::size_t f = 0; f < 2; ++f)
    for (std::size_t k = 0; k < kHandKeypointCount; ++k) EXPECT_EQ(back.frames[f][k], kp.frames[f][k]);
  EXPECT_THROW(parse_hand_keypoints("{\"t\":0,\"joints\":[[0,0,0]]}\n"), Error);
  kp.timestamps = {0.1, 0.1};
  EXPECT_THROW(kp.validate(), Error);
}

TEST(Retarget, MappingRoundTrip) {
  const RobotModel hand = fixtures::hand_model();
  const KeypointMapping m = fixtures::hand_mapping(hand);
  const KeypointMapping back = parse_keypoint_mapping(format_keypoint_mapping(m));
  ASSERT_EQ(back.entries.size(), m.entries.size());
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    EXPECT_EQ(back.entries[i].link, m.entries[i].link);
    EXPECT_EQ(back.entries[i].keypoint, m.entries[i].keypoint);
    EXPECT_EQ(back.entries[i].weight, m.entries[i].weight);
  }
}
