#pragma once

#include <string>
#include <vector>

#include "dexrecon/demo/demo.hpp"
#include "dexrecon/geom/random.hpp"
#include "dexrecon/retarget/retarget.hpp"

namespace dexrecon::fixtures {

// Planar arm: base -> (revolute z) link1 -> (revolute z, +1 m x) link2 ->
// (fixed, +1 m x) tip. Unit boxes on link1 and link2.
std::string two_link_urdf();

// Four fingers (thumb, index, middle, ring), each with abduction, MCP, PIP
// and DIP joints (16 joints) and a sphere fingertip link on a fixed joint.
std::string hand_urdf();
RobotModel hand_model();

inline const std::vector<std::string> kFingers{"thumb", "index", "middle", "ring"};
std::vector<std::string> hand_tip_links();

// Wrist, four fingertips, and the PIP/DIP joint origins at half weight.
KeypointMapping hand_mapping(const RobotModel& hand);

// Human-style keypoints read off the robot at q: 0 = palm origin, finger i
// uses 4i+1..4i+4 = proximal, middle, distal and tip link origins. The
// little finger slots (17-20) repeat the ring finger.
HandPose keypoints_at(const RobotModel& hand, const RobotConfig& q);

// Joint values drawn uniformly from the middle `fraction` of each range.
std::vector<double> random_joints(const RobotModel& model, Rng& rng, double fraction = 0.6);
RigidTransform random_transform(Rng& rng, double max_translation = 0.2);

// Thumb-index pinch on a cylinder. The cylinder axis is perpendicular to
// the segment between the two tip centers and passes through its midpoint;
// its radius makes both tip spheres tangent.
struct PinchFixture {
  RobotConfig q_star;
  TriMesh cylinder;
  Vec3 center;
  Vec3 axis;
  double radius = 0.0;
  Vec3 thumb_tip, index_tip;
};
RobotConfig pinch_config(const RobotModel& hand);
// The pinch with the middle fingertip also resting on the cylinder, next to
// the index tip.
RobotConfig tripod_config(const RobotModel& hand);
PinchFixture pinch_fixture(const RobotModel& hand, int segments = 96, int rings = 60);

// Pick-and-move demonstration: the hand approaches the tripod grip over the
// cylinder, closes, then carries the object up and sideways.
struct PickMoveFixture {
  Trajectory trajectory;
  TriMesh object;       // in the object frame
  std::string object_id = "cylinder";
  std::size_t approach_frame = 0;  // first frame expected within d_approach
  std::size_t grasp_frame = 0;     // first frame with the tips in contact
};
PickMoveFixture pick_move_fixture(const RobotModel& hand);

}  // namespace dexrecon::fixtures
