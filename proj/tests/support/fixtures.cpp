#include "fixtures.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dexrecon/geom/primitives.hpp"
#include "dexrecon/robot/kinematics.hpp"
#include "dexrecon/robot/urdf.hpp"

namespace dexrecon::fixtures {

namespace {

struct FingerSpec {
  std::string name;
  Vec3 base;
  Vec3 rpy;
  std::string flex_axis;
  std::array<double, 3> lengths;
};

const std::vector<FingerSpec>& finger_specs() {
  static const std::vector<FingerSpec> specs{
      {"thumb", {0.03, -0.03, 0.01}, {1.4, 0.0, 0.0}, "-1 0 0", {0.04, 0.03, 0.025}},
      {"index", {0.025, 0.0, 0.09}, {0.0, 0.0, 0.0}, "1 0 0", {0.045, 0.03, 0.025}},
      {"middle", {0.0, 0.0, 0.09}, {0.0, 0.0, 0.0}, "1 0 0", {0.05, 0.032, 0.025}},
      {"ring", {-0.025, 0.0, 0.09}, {0.0, 0.0, 0.0}, "1 0 0", {0.045, 0.03, 0.025}},
  };
  return specs;
}

constexpr double kPhalanxRadius = 0.008;
constexpr double kTipRadius = 0.009;

std::string vec(const Vec3& v) {
  std::ostringstream os;
  os.precision(17);
  os << v.x() << ' ' << v.y() << ' ' << v.z();
  return os.str();
}

void revolute(std::ostringstream& os, const std::string& name, const std::string& parent, const std::string& child,
              const Vec3& xyz, const Vec3& rpy, const std::string& axis, double lo, double hi) {
  os << "  <joint name=\"" << name << "\" type=\"revolute\">\n"
     << "    <parent link=\"" << parent << "\"/><child link=\"" << child << "\"/>\n"
     << "    <origin xyz=\"" << vec(xyz) << "\" rpy=\"" << vec(rpy) << "\"/>\n"
     << "    <axis xyz=\"" << axis << "\"/>\n"
     << "    <limit lower=\"" << lo << "\" upper=\"" << hi << "\" effort=\"1\" velocity=\"1\"/>\n"
     << "  </joint>\n";
}

void cylinder_link(std::ostringstream& os, const std::string& name, double length) {
  os << "  <link name=\"" << name << "\"><collision><origin xyz=\"0 0 " << length / 2
     << "\"/><geometry><cylinder radius=\"" << kPhalanxRadius << "\" length=\"" << length
     << "\"/></geometry></collision></link>\n";
}

Vec3 link_origin(const KinematicState& state, const RobotModel& hand, const std::string& link) {
  return state.link_poses[hand.require_link(link)].translation();
}

}  // namespace

std::string two_link_urdf() {
  return R"(<robot name="two_link">
  <link name="base"/>
  <link name="link1"><collision><origin xyz="0.5 0 0"/><geometry><box size="1 0.1 0.1"/></geometry></collision></link>
  <link name="link2"><collision><origin xyz="0.5 0 0"/><geometry><box size="1 0.1 0.1"/></geometry></collision></link>
  <link name="tip"/>
  <joint name="joint1" type="revolute">
    <parent link="base"/><child link="link1"/>
    <origin xyz="0 0 0"/><axis xyz="0 0 1"/>
    <limit lower="-3.14159" upper="3.14159" effort="1" velocity="1"/>
  </joint>
  <joint name="joint2" type="revolute">
    <parent link="link1"/><child link="link2"/>
    <origin xyz="1 0 0"/><axis xyz="0 0 1"/>
    <limit lower="-3.14159" upper="3.14159" effort="1" velocity="1"/>
  </joint>
  <joint name="tip_joint" type="fixed">
    <parent link="link2"/><child link="tip"/>
    <origin xyz="1 0 0"/>
  </joint>
</robot>
)";
}

std::string hand_urdf() {
  std::ostringstream os;
  os << "<robot name=\"hand16\">\n"
     << "  <link name=\"palm\"><collision><origin xyz=\"0 0 0.045\"/>"
     << "<geometry><box size=\"0.08 0.02 0.09\"/></geometry></collision></link>\n";
  for (const FingerSpec& f : finger_specs()) {
    const std::string& n = f.name;
    os << "  <link name=\"" << n << "_base\"/>\n";
    cylinder_link(os, n + "_proximal", f.lengths[0]);
    cylinder_link(os, n + "_middle", f.lengths[1]);
    cylinder_link(os, n + "_distal", f.lengths[2]);
    os << "  <link name=\"" << n << "_tip\"><collision><geometry><sphere radius=\"" << kTipRadius
       << "\"/></geometry></collision></link>\n";
    revolute(os, n + "_abd", "palm", n + "_base", f.base, f.rpy, "0 1 0", -0.4, 0.4);
    revolute(os, n + "_mcp", n + "_base", n + "_proximal", Vec3::Zero(), Vec3::Zero(), f.flex_axis, -0.2, 1.7);
    revolute(os, n + "_pip", n + "_proximal", n + "_middle", Vec3(0, 0, f.lengths[0]), Vec3::Zero(), f.flex_axis,
             -0.2, 1.7);
    revolute(os, n + "_dip", n + "_middle", n + "_distal", Vec3(0, 0, f.lengths[1]), Vec3::Zero(), f.flex_axis,
             -0.2, 1.7);
    os << "  <joint name=\"" << n << "_tip_joint\" type=\"fixed\">\n"
       << "    <parent link=\"" << n << "_distal\"/><child link=\"" << n << "_tip\"/>\n"
       << "    <origin xyz=\"0 0 " << f.lengths[2] << "\"/>\n"
       << "  </joint>\n";
  }
  os << "</robot>\n";
  return os.str();
}

RobotModel hand_model() { return parse_urdf(hand_urdf()); }

std::vector<std::string> hand_tip_links() {
  std::vector<std::string> out;
  for (const std::string& f : kFingers) out.push_back(f + "_tip");
  return out;
}

KeypointMapping hand_mapping(const RobotModel& hand) {
  std::vector<std::pair<std::string, std::size_t>> phalanges;
  for (std::size_t i = 0; i < kFingers.size(); ++i) {
    phalanges.emplace_back(kFingers[i] + "_middle", 4 * i + 2);
    phalanges.emplace_back(kFingers[i] + "_distal", 4 * i + 3);
  }
  return default_mapping(hand, hand_tip_links(), phalanges);
}

HandPose keypoints_at(const RobotModel& hand, const RobotConfig& q) {
  const KinematicState state = compute_kinematics(hand, q);
  HandPose pose;
  pose[0] = link_origin(state, hand, hand.root_name());
  for (std::size_t i = 0; i < kFingers.size(); ++i) {
    const std::string& f = kFingers[i];
    pose[4 * i + 1] = link_origin(state, hand, f + "_proximal");
    pose[4 * i + 2] = link_origin(state, hand, f + "_middle");
    pose[4 * i + 3] = link_origin(state, hand, f + "_distal");
    pose[4 * i + 4] = link_origin(state, hand, f + "_tip");
  }
  for (std::size_t k = 17; k < kHandKeypointCount; ++k) pose[k] = pose[k - 4];
  return pose;
}

std::vector<double> random_joints(const RobotModel& model, Rng& rng, double fraction) {
  std::vector<double> out(model.dof());
  for (std::size_t k = 0; k < model.dof(); ++k) {
    const Joint& j = model.joints()[model.movable_joint(k)];
    const double mid = 0.5 * (j.lower + j.upper);
    const double half = 0.5 * fraction * (j.upper - j.lower);
    out[k] = rng.uniform(mid - half, mid + half);
  }
  return out;
}

RigidTransform random_transform(Rng& rng, double max_translation) {
  Vec3 axis;
  do {
    axis = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  } while (axis.norm() < 1e-3 || axis.norm() > 1.0);
  const double angle = rng.uniform(0.0, std::numbers::pi);
  const Vec3 t(rng.uniform(-max_translation, max_translation), rng.uniform(-max_translation, max_translation),
               rng.uniform(-max_translation, max_translation));
  return RigidTransform::from_axis_angle(axis.normalized(), angle, t);
}

RobotConfig pinch_config(const RobotModel& hand) {
  RobotConfig q = hand.zero_config();
  const std::vector<double> joints{
      0.0, 0.3, 0.5, 0.4,  // thumb
      0.0, 1.0, 0.3, 0.2,  // index
      0.0, 0.0, 0.0, 0.0,  // middle
      0.0, 0.0, 0.0, 0.0,  // ring
  };
  q.joint_angles = joints;
  hand.check_dimension(q);
  return q;
}

RobotConfig tripod_config(const RobotModel& hand) {
  RobotConfig q = pinch_config(hand);
  q.joint_angles[9] = 0.8025;
  q.joint_angles[10] = 0.6372;
  q.joint_angles[11] = 0.446;
  return q;
}

PinchFixture pinch_fixture(const RobotModel& hand, int segments, int rings) {
  PinchFixture fx;
  fx.q_star = pinch_config(hand);
  const KinematicState state = compute_kinematics(hand, fx.q_star);
  fx.thumb_tip = link_origin(state, hand, "thumb_tip");
  fx.index_tip = link_origin(state, hand, "index_tip");
  const Vec3 d = fx.index_tip - fx.thumb_tip;
  const Vec3 n = d.normalized();
  fx.center = 0.5 * (fx.thumb_tip + fx.index_tip);
  fx.axis = (Vec3::UnitX() - Vec3::UnitX().dot(n) * n).normalized();
  fx.radius = 0.5 * d.norm() - kTipRadius;
  const Quat align = Quat::FromTwoVectors(Vec3::UnitZ(), fx.axis);
  fx.cylinder = transformed(make_cylinder(fx.radius, 0.07, segments, rings), RigidTransform(align, fx.center));
  return fx;
}

PickMoveFixture pick_move_fixture(const RobotModel& hand) {
  const PinchFixture pinch = pinch_fixture(hand);
  const RobotConfig grip = tripod_config(hand);
  PickMoveFixture fx;
  fx.object = make_cylinder(pinch.radius, 0.07, 96, 60);

  // Object pose in the wrist frame at the grasp, and the retreat direction
  // perpendicular to both the cylinder axis and the pinch line.
  const RigidTransform object_in_hand(Quat::FromTwoVectors(Vec3::UnitZ(), pinch.axis), pinch.center);
  Vec3 retreat = pinch.axis.cross((pinch.index_tip - pinch.thumb_tip).normalized()).normalized();
  if (retreat.y() < 0) retreat = -retreat;
  const double r = pinch.radius + kTipRadius;

  const RigidTransform wrist_grasp = RigidTransform::from_translation(Vec3(0.0, 0.0, 0.1) - pinch.center);
  const RigidTransform object_rest = wrist_grasp * object_in_hand;

  // Fingertip gap to the cylinder surface over the approach.
  const std::vector<double> gaps{0.14,  0.12,  0.10,  0.085, 0.07,  0.058, 0.048, 0.038,
                                 0.03,  0.025, 0.015, 0.011, 0.008, 0.006, 0.004, 0.0};
  fx.approach_frame = 10;
  fx.grasp_frame = gaps.size() - 1;

  fx.trajectory.joint_names = hand.joint_names();
  const double dt = 0.05;
  std::size_t t = 0;
  for (double gap : gaps) {
    const double offset = std::sqrt((gap + r) * (gap + r) - r * r);
    TrajectoryFrame frame;
    frame.time = dt * static_cast<double>(t++);
    frame.config.wrist = wrist_grasp * RigidTransform::from_translation(offset * retreat);
    frame.config.joint_angles = grip.joint_angles;
    frame.objects[fx.object_id] = object_rest;
    fx.trajectory.frames.push_back(std::move(frame));
  }
  for (int k = 1; k <= 24; ++k) {
    const RigidTransform carry(Quat(Eigen::AngleAxisd(0.02 * k, Vec3::UnitZ())), Vec3(0.004, 0.0, 0.008) * k);
    TrajectoryFrame frame;
    frame.time = dt * static_cast<double>(t++);
    frame.config.wrist = carry * wrist_grasp;
    frame.config.joint_angles = grip.joint_angles;
    frame.objects[fx.object_id] = carry * object_rest;
    fx.trajectory.frames.push_back(std::move(frame));
  }
  return fx;
}

}  // namespace dexrecon::fixtures
