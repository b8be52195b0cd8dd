#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "dexrecon/calib/calib.hpp"
#include "dexrecon/demo/demo.hpp"
#include "dexrecon/error.hpp"
#include "dexrecon/geom/primitives.hpp"
#include "dexrecon/io/json_util.hpp"
#include "dexrecon/robot/config_space.hpp"
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

struct PickMove {
  RobotModel hand = fixtures::hand_model();
  fixtures::PickMoveFixture fx = fixtures::pick_move_fixture(hand);
  Trajectory marked() const {
    Trajectory t = fx.trajectory;
    t.t1 = fx.approach_frame;
    t.t2 = fx.grasp_frame;
    return t;
  }
};

const PickMove& pick_move() {
  static const PickMove instance;
  return instance;
}

}  // namespace

TEST(Trajectory, JsonLinesRoundTripIsExact) {
  const Trajectory src = pick_move().marked();
  const std::string text = format_trajectory(src);
  const Trajectory back = parse_trajectory(text);
  EXPECT_EQ(format_trajectory(back), text);
  ASSERT_EQ(back.size(), src.size());
  EXPECT_EQ(back.t1, src.t1);
  EXPECT_EQ(back.frames[7].config.wrist.translation(), src.frames[7].config.wrist.translation());
  EXPECT_EQ(back.frames[20].objects.at("cylinder").rotation().coeffs(), src.frames[20].objects.at("cylinder").rotation().coeffs());
}

TEST(Trajectory, Validation) {
  Trajectory t = pick_move().marked();
  t.frames[3].time = t.frames[2].time;
  EXPECT_EQ(code_of([&] { t.validate(); }), ErrorCode::InvalidArgument);
  t = pick_move().marked();
  t.frames[3].config.joint_angles.pop_back();
  EXPECT_EQ(code_of([&] { t.validate(); }), ErrorCode::DimensionMismatch);
  t = pick_move().marked();
  t.t1 = 30;
  EXPECT_THROW(t.validate(), Error);
  EXPECT_EQ(code_of([] { parse_trajectory("{\"format\":\"other\"}\n"); }), ErrorCode::IoFormat);
  EXPECT_EQ(code_of([] { read_trajectory("/nonexistent/traj.jsonl"); }), ErrorCode::IoMissing);
}

TEST(Segment, PickMoveStages) {
  const PickMove& pm = pick_move();
  const StageMarks m = segment_stages(pm.fx.trajectory, pm.fx.object_id, pm.fx.object, pm.hand);
  EXPECT_EQ(m.t1, pm.fx.approach_frame);
  EXPECT_EQ(m.t2, pm.fx.grasp_frame);
}

TEST(Segment, NoApproachWhenObjectFarAway) {
  const PickMove& pm = pick_move();
  Trajectory t = pm.fx.trajectory;
  for (auto& f : t.frames) f.objects[pm.fx.object_id] = RigidTransform::from_translation(Vec3(5, 5, 5));
  EXPECT_EQ(code_of([&] { segment_stages(t, pm.fx.object_id, pm.fx.object, pm.hand); }), ErrorCode::NoApproach);
  EXPECT_EQ(code_of([&] { segment_stages(t, "missing", pm.fx.object, pm.hand); }), ErrorCode::MissingPose);
}

TEST(Segment, ObjectMotionMeasuresVertexDisplacement) {
  const PickMove& pm = pick_move();
  EXPECT_EQ(object_motion(pm.fx.trajectory, pm.fx.object_id, pm.fx.object, 3), 0.0);
  EXPECT_GT(object_motion(pm.fx.trajectory, pm.fx.object_id, pm.fx.object, pm.fx.grasp_frame), 0.005);
}

TEST(Synthesis, TransformKeepsObjectDisplacementInBounds) {
  SynthesisSpec spec;
  spec.target_object = "cylinder";
  const Vec3 pivot(0.3, -0.1, 0.2);
  for (int i = 0; i < 200; ++i) {
    const RigidTransform T = sample_scene_transform(spec, pivot, 77 + i, 0);
    const Vec3 moved = T.apply(pivot) - pivot;
    EXPECT_NEAR(moved.z(), 0.0, 1e-15);
    EXPECT_LE(std::abs(moved.x()), 0.2 + 1e-15);
    EXPECT_LE(std::abs(moved.y()), 0.2 + 1e-15);
    const Vec3 up = T.rotate(Vec3::UnitZ());
    EXPECT_NEAR(up.z(), 1.0, 1e-12);
    EXPECT_LE(std::acos(std::clamp(T.rotate(Vec3::UnitX()).x(), -1.0, 1.0)), std::numbers::pi / 4 + 1e-12);
  }
  EXPECT_EQ((sample_scene_transform(spec, pivot, 5, 2).translation() -
             sample_scene_transform(spec, pivot, 5, 2).translation())
                .norm(),
            0.0);
}

TEST(Synthesis, InterpolatedFramesConnectEndpoints) {
  const PickMove& pm = pick_move();
  const Trajectory src = pm.marked();
  const RigidTransform T = RigidTransform::from_axis_angle(Vec3::UnitZ(), 0.3, Vec3(0.05, -0.02, 0.0));
  const Trajectory out = transform_demo(src, "cylinder", 5, 39, T);
  EXPECT_EQ(out.frames[0].config.wrist.translation(), src.frames[0].config.wrist.translation());
  EXPECT_LT((out.frames[5].config.wrist.translation() - T.apply(src.frames[5].config.wrist.translation())).norm(),
            1e-12);
  for (std::size_t t = 1; t < 5; ++t) {
    const Vec3 a = out.frames[t - 1].config.wrist.translation();
    const Vec3 b = out.frames[t].config.wrist.translation();
    const Vec3 c = out.frames[t + 1].config.wrist.translation();
    EXPECT_LT(((b - a) - (c - b)).norm(), 1e-12);
  }
}

TEST(Synthesis, ErrorsAndRetryExhaustion) {
  const PickMove& pm = pick_move();
  SynthesisSpec spec;
  spec.target_object = "cylinder";
  spec.seed = 1;
  const SceneMeshes scene{{"cylinder", pm.fx.object}};
  EXPECT_EQ(code_of([&] { synthesize(pm.fx.trajectory, spec, scene, pm.hand); }), ErrorCode::UnmarkedTrajectory);
  spec.method = "spline";
  EXPECT_THROW(synthesize(pm.marked(), spec, scene, pm.hand), Error);
  spec.method = "interpolate";

  // A small obstacle around the frame-0 wrist, which regeneration never moves.
  Trajectory src = pm.marked();
  const RigidTransform at_wrist = RigidTransform::from_translation(src.frames[0].config.wrist.translation());
  for (auto& f : src.frames) f.objects["post"] = at_wrist;
  SceneMeshes blocked = scene;
  blocked["post"] = make_uv_sphere(0.005);
  spec.max_retries = 3;
  EXPECT_EQ(code_of([&] { synthesize(src, spec, blocked, pm.hand); }), ErrorCode::RetryExhausted);
}

TEST(Export, ActionsIntegrateBackToTrajectory) {
  const PickMove& pm = pick_move();
  const Trajectory src = pm.marked();
  const auto dir = std::filesystem::temp_directory_path() / "dexrecon_export_unit";
  std::filesystem::remove_all(dir);
  const auto samples = export_training_set({src}, pm.hand, pm.fx.object, pm.fx.object_id, 64, 3, dir);
  ASSERT_TRUE(std::filesystem::exists(dir / "traj_0000" / "obs.json"));
  const auto actions = parse_actions(read_text_file(dir / "traj_0000" / "actions.json"));
  ASSERT_EQ(actions.size(), src.size() - 1 - *src.t2);
  RobotConfig q = src.frames[*src.t2].config;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    q = retract(q, actions[k]);
    const RobotConfig& ref = src.frames[*src.t2 + k + 1].config;
    EXPECT_LT(config_difference(q, ref).norm(), 1e-9);
  }
  const Json obs = read_json_file(dir / "traj_0000" / "obs.json");
  EXPECT_EQ(obs.at("robot_points").size(), 64u * 3);
  EXPECT_EQ(samples[0].object_points.size(), 64u);
  std::filesystem::remove_all(dir);
}

TEST(Gravity, RotationAndEdgeCases) {
  for (const Vec3& g : {Vec3(0, 0, -9.81), Vec3(0, 0, 9.81), Vec3(1, 2, 3), Vec3(0, 1e-9, -1)}) {
    const RigidTransform R = gravity_rotation(g);
    EXPECT_LT((R.rotate(g.normalized()) - Vec3(0, 0, -1)).norm(), 1e-12);
  }
  EXPECT_TRUE(gravity_rotation(Vec3(0, 0, -1)).rotation_matrix().isIdentity(1e-15));
  EXPECT_EQ(code_of([] { gravity_rotation(Vec3::Zero()); }), ErrorCode::ZeroVector);
}

TEST(Gravity, AlignTrajectoryRotatesAllPoses) {
  const Trajectory src = pick_move().marked();
  const RigidTransform R = gravity_rotation(Vec3(0.2, -0.9, 0.3));
  const Trajectory out = align_trajectory(src, R);
  for (std::size_t t = 0; t < src.size(); t += 7) {
    EXPECT_LT((out.frames[t].config.wrist.translation() - R.apply(src.frames[t].config.wrist.translation())).norm(),
              1e-12);
    EXPECT_LT((out.frames[t].objects.at("cylinder").translation() -
               R.apply(src.frames[t].objects.at("cylinder").translation()))
                  .norm(),
              1e-12);
  }
}

TEST(Depth, CorrectionAveragesValidPixels) {
  DepthGrid g{2, 3, {1.0, 2.0, 3.0, 4.0, 0.0, 6.0}};
  const std::vector<Eigen::Vector2d> kp{{0.2, 0.1}, {2.4, 1.3}, {1.0, 1.0}, {10.0, 10.0}};
  EXPECT_DOUBLE_EQ(hand_depth_correction(kp, g), (1.0 + 6.0) / 2.0);
  EXPECT_EQ(code_of([&] { hand_depth_correction(std::vector<Eigen::Vector2d>{{1.0, 1.0}}, g); }),
            ErrorCode::NoValidSamples);
  const DepthGrid back = parse_depth_grid(format_depth_grid(g));
  EXPECT_EQ(back.values, g.values);
  g.values.pop_back();
  EXPECT_THROW(g.validate(), Error);
}

TEST(Silhouette, IouAndPgmRoundTrip) {
  MaskImage a{2, 2, {1, 0, 1, 0}}, b{2, 2, {1, 1, 0, 0}}, empty{2, 2, {0, 0, 0, 0}};
  EXPECT_DOUBLE_EQ(mask_iou(a, b), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(mask_iou(empty, empty), 1.0);
  const MaskImage back = parse_pgm(format_pgm(a));
  EXPECT_EQ(back.rows, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) EXPECT_EQ(back.at(r, c), a.at(r, c));
  const MaskImage commented = parse_pgm(std::string("P5\n# note\n2 1\n255\n\x00\xff", 20));
  EXPECT_FALSE(commented.at(0, 0));
  EXPECT_TRUE(commented.at(0, 1));
  EXPECT_THROW(parse_pgm("P2\n1 1\n255\n0"), Error);
}

TEST(Silhouette, RenderProjectsCenterPixel) {
  const CameraIntrinsics K{100, 100, 49.5, 39.5, 100, 80};
  const std::vector<Vec3> pts{Vec3(0, 0, 1), Vec3(0, 0, -1)};
  const MaskImage m = render_silhouette(pts, RigidTransform::identity(), K, 0);
  EXPECT_EQ(m.occupied(), 1u);
  EXPECT_TRUE(m.at(40, 50));
  EXPECT_EQ(render_silhouette(pts, RigidTransform::identity(), K, 1).occupied(), 9u);
}

TEST(ScaleSearch, CandidatesAndErrors) {
  const std::vector<double> c = default_scale_candidates();
  ASSERT_EQ(c.size(), 16u);
  EXPECT_EQ(c.front(), 0.5);
  EXPECT_EQ(c.back(), 2.0);
  const TriMesh box = make_box(Vec3(0.1, 0.1, 0.1));
  const CameraIntrinsics K{300, 300, 159.5, 119.5, 320, 240};
  const std::vector<MaskImage> masks{MaskImage{240, 320, std::vector<std::uint8_t>(320 * 240, 0)}};
  const std::vector<RigidTransform> poses{RigidTransform::from_translation(Vec3(0, 0, -2))};
  EXPECT_EQ(code_of([&] { scale_search(box, RigidTransform::identity(), K, masks, poses, c); }),
            ErrorCode::NoVisiblePoints);
  EXPECT_EQ(code_of([&] { scale_search(box, RigidTransform::identity(), K, masks, poses, std::vector<double>{}); }),
            ErrorCode::EmptyCandidates);
}

TEST(Intrinsics, JsonRoundTripAndValidation) {
  const CameraIntrinsics K{600, 610, 320, 240, 640, 480};
  const CameraIntrinsics back = parse_intrinsics(format_intrinsics(K));
  EXPECT_EQ(back.fx, 600);
  EXPECT_EQ(back.height, 480);
  EXPECT_THROW(parse_intrinsics(R"({"fx":-1,"fy":1,"cx":0,"cy":0,"width":1,"height":1})"), Error);
}
