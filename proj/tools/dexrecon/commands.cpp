#include "dexrecon/commands.hpp"

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>

#include "dexrecon/calib/calib.hpp"
#include "dexrecon/contact/contact.hpp"
#include "dexrecon/demo/demo.hpp"
#include "dexrecon/error.hpp"
#include "dexrecon/geom/obj_io.hpp"
#include "dexrecon/grasp/grasp.hpp"
#include "dexrecon/io/json_util.hpp"
#include "dexrecon/retarget/retarget.hpp"
#include "dexrecon/robot/urdf.hpp"

namespace dexrecon::cli {

const char* const kFormatsHelp = R"(File formats:
  URDF        XML robot description (links, joints; box/sphere/cylinder/OBJ mesh geometry).
  OBJ         Wavefront text: "v x y z" and "f i j k" lines. A file without faces is a point set.
  trajectory  JSON lines. Line 1: {"format":"dexrecon-trajectory","version":1,"joints":[names],
              "t1":i|null,"t2":i|null,"quaternion":"wxyz"}. Then per frame:
              {"t":s,"wrist":{"q":[w,x,y,z],"t":[x,y,z]},"joints":[...],"objects":{id:{"q":[..],"t":[..]}}}
  keypoints   JSON lines, one per frame: {"t":s,"joints":[[x,y,z] x 21]} (0 = wrist, 4 per finger).
  mapping     JSON {"entries":[{"link":name,"offset":[x,y,z],"keypoint":i,"weight":w}]}.
  config q    JSON {"wrist":{"q":[w,x,y,z],"t":[x,y,z]},"joints":[...]}.
  contact map JSON {"c_rad":r,"values":[...]} (one value per mesh vertex, in [0,1]).
  distances   Binary. Magic "VMDM1\n", ascii "N_R N_O\n", then N_R*N_O little-endian float32, row-major.
  depth grid  Binary. Magic "VMGRID1\n", ascii "rows cols\n", then rows*cols little-endian float32, row-major.
  mask        Binary PGM: magic "P5", width, height, maxval, raster; nonzero = occupied.
  intrinsics  JSON {"fx":..,"fy":..,"cx":..,"cy":..,"width":..,"height":..}.
  poses       JSON {"camera":{"q":[..],"t":[..]},"objects":[{"q":[..],"t":[..]}, ...]} (one per mask).
  export      One directory per trajectory with obs.json and actions.json; actions are
              [translation delta (3), rotation vector of R_next R^T (3), joint deltas].
Errors are printed to stderr as {"error":"E_...","message":...}; exit 2 for missing inputs,
3 for usage errors, 1 for other failures.
)";

namespace {

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

RobotConfig config_from_json(const Json& j, const RobotModel& model) {
  RobotConfig q = model.zero_config();
  try {
    if (j.contains("wrist")) q.wrist = transform_from_json(j.at("wrist"));
    if (j.contains("joints")) q.joint_angles = doubles_from_json(j.at("joints"));
  } catch (const Json::exception& e) {
    fail(ErrorCode::IoFormat, std::string("robot configuration: ") + e.what());
  }
  model.check_dimension(q);
  return q;
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const std::string& command) {
  if (!seed) fail(ErrorCode::Usage, command + " is randomized and needs an explicit --seed");
  return *seed;
}

std::pair<std::size_t, std::size_t> stage_window(const Trajectory& traj, std::optional<std::size_t> t1,
                                                 std::optional<std::size_t> t2) {
  const auto a = t1 ? t1 : traj.t1;
  const auto b = t2 ? t2 : traj.t2;
  if (!a || !b) fail(ErrorCode::UnmarkedTrajectory, "trajectory has no stage marks; pass --t1 and --t2");
  if (*a > *b || *b >= traj.size()) fail(ErrorCode::InvalidArgument, "stage window out of range");
  return {*a, *b};
}

const RigidTransform& pose_in(const TrajectoryFrame& frame, const std::string& id) {
  const auto it = frame.objects.find(id);
  if (it == frame.objects.end()) fail(ErrorCode::MissingPose, "object '" + id + "' has no pose");
  return it->second;
}

struct FkArgs {
  std::string model, q, out;
};

void run_fk(const FkArgs& a) {
  const RobotModel model = load_urdf(a.model);
  const RobotConfig q = a.q.empty() ? model.zero_config() : config_from_json(read_json_file(a.q), model);
  std::vector<std::string> warnings;
  const KinematicState state = compute_kinematics(model, q, &warnings);
  Json links = Json::object();
  for (std::size_t l = 0; l < model.links().size(); ++l) {
    links[model.links()[l].name] = transform_to_json(state.link_poses[l]);
  }
  Json j;
  j["links"] = std::move(links);
  j["warnings"] = warnings;
  emit(j.dump(2) + "\n", a.out);
}

struct RetargetArgs {
  std::string model, keypoints, mapping, out, report;
  std::vector<std::string> fingertips;
  double smoothness = 0.0;
  int max_iters = 200;
};

void run_retarget(const RetargetArgs& a) {
  const RobotModel model = load_urdf(a.model);
  const HandKeypoints human = read_hand_keypoints(a.keypoints);
  KeypointMapping mapping;
  if (!a.mapping.empty()) {
    mapping = read_keypoint_mapping(a.mapping);
  } else {
    std::vector<std::string> tips = a.fingertips;
    if (tips.empty()) {
      for (std::size_t l : model.leaf_links()) tips.push_back(model.links()[l].name);
    }
    mapping = default_mapping(model, tips);
  }
  IkOptions ik;
  ik.max_iterations = a.max_iters;
  const TrajectoryRetarget result = retarget_trajectory(model, mapping, human, a.smoothness, ik);
  write_text_file(a.out, format_trajectory(result.trajectory));
  if (!a.report.empty()) {
    Json frames = Json::array();
    for (const RetargetResult& r : result.report) {
      frames.push_back({{"rms_error", r.rms_error},
                        {"objective", r.objective},
                        {"iterations", r.iterations},
                        {"converged", r.converged}});
    }
    write_text_file(a.report, Json{{"frames", frames}}.dump(2) + "\n");
  }
}

struct ContactArgs {
  std::string model, trajectory, object, object_id, hand_targets, object_targets, out, report;
  double c_rad = 0.01, penetration_weight = 10.0;
  bool strict = false;
  int max_iters = 100;
  std::optional<std::size_t> t1, t2;
};

void run_contact_opt(const ContactArgs& a) {
  const RobotModel model = load_urdf(a.model);
  Trajectory traj = read_trajectory(a.trajectory);
  const TriMesh object = read_obj(a.object);
  const auto [first, last] = stage_window(traj, a.t1, a.t2);
  ContactEnergyOptions energy;
  energy.c_rad = a.c_rad;
  energy.penetration_weight = a.penetration_weight;
  energy.strict_formula = a.strict;
  ContactOptOptions opt;
  opt.max_iterations = a.max_iters;

  std::optional<ContactTargets> fixed;
  if (!a.hand_targets.empty() || !a.object_targets.empty()) {
    if (a.hand_targets.empty() || a.object_targets.empty()) {
      fail(ErrorCode::Usage, "--hand-targets and --object-targets go together");
    }
    fixed = ContactTargets{
        read_contact_map(a.hand_targets, robot_vertices_at(model, traj.frames[first].config).size()).values,
        read_contact_map(a.object_targets, object.vertex_count()).values};
  }

  Json frames = Json::array();
  for (std::size_t t = first; t <= last; ++t) {
    const TriMesh world_object = transformed(object, pose_in(traj.frames[t], a.object_id));
    const ContactTargets targets =
        fixed ? *fixed : heuristic_targets(model, traj.frames[t].config, world_object, a.c_rad);
    const ContactOptResult r = optimize_contact(model, traj.frames[t].config, world_object, targets, energy, opt);
    traj.frames[t].config = r.config;
    frames.push_back({{"frame", t},
                      {"initial_energy", r.energy_trace.front()},
                      {"final_energy", r.energy_trace.back()},
                      {"accepted_steps", r.accepted_steps}});
  }
  write_text_file(a.out, format_trajectory(traj));
  if (!a.report.empty()) write_text_file(a.report, Json{{"frames", frames}}.dump(2) + "\n");
}

struct GraspArgs {
  std::string model, distances, object_points, q_init, out;
  std::optional<std::uint64_t> seed;
  int max_iters = 200;
};

void run_grasp_solve(const GraspArgs& a) {
  const std::uint64_t seed = require_seed(a.seed, "grasp-solve");
  const RobotModel model = load_urdf(a.model);
  const DistanceMatrix D = read_distance_matrix(a.distances);
  const TriMesh anchors = read_obj(a.object_points);
  const Multilateration ml = multilaterate_points(D, anchors.vertices());
  const RobotPointSampler sampler(model, D.rows(), seed);
  const RobotConfig q0 = a.q_init.empty() ? model.zero_config() : config_from_json(read_json_file(a.q_init), model);
  IkOptions ik;
  ik.max_iterations = a.max_iters;
  GraspResult result = fit_grasp_config(sampler, ml.positions, q0, ik);
  result.multilateration_residuals = ml.residuals;
  emit(format_grasp_result(result, model.joint_names()), a.out);
}

struct StabilityArgs {
  std::string model, grasp, object, out;
  double mass = 1.0, mu = 0.5, disturbance_scale = 1.0, epsilon = 0.002, max_normal_force = 0.0;
  int cone_edges = 8;
};

void run_stability(const StabilityArgs& a) {
  const RobotModel model = load_urdf(a.model);
  const RobotConfig q = config_from_json(read_json_file(a.grasp), model);
  const TriMesh object = read_obj(a.object);
  const std::vector<Contact> contacts = extract_contacts(robot_mesh_at(model, q).mesh, object, a.epsilon);
  StabilityOptions options;
  options.mass = a.mass;
  options.mu = a.mu;
  options.disturbance_scale = a.disturbance_scale;
  options.cone_edges = a.cone_edges;
  options.max_normal_force = a.max_normal_force;
  emit(format_stability_report(stability_check(contacts, surface_centroid(object), options)), a.out);
}

struct SegmentArgs {
  std::string model, trajectory, object, object_id, out;
  std::vector<std::string> fingertips;
  double d_approach = 0.02, contact_eps = 0.002, motion_eps = 0.005;
};

void run_segment(const SegmentArgs& a) {
  const RobotModel model = load_urdf(a.model);
  Trajectory traj = read_trajectory(a.trajectory);
  const TriMesh object = read_obj(a.object);
  SegmentOptions options;
  options.d_approach = a.d_approach;
  options.contact_eps = a.contact_eps;
  options.motion_eps = a.motion_eps;
  options.fingertip_links = a.fingertips;
  const StageMarks marks = segment_stages(traj, a.object_id, object, model, options);
  traj.t1 = marks.t1;
  traj.t2 = marks.t2;
  if (!a.out.empty()) write_text_file(a.out, format_trajectory(traj));
  std::cout << Json{{"t1", marks.t1}, {"t2", marks.t2}}.dump() << "\n";
}

struct SynthArgs {
  std::string model, trajectory, out_dir;
  std::vector<std::string> scene;
  SynthesisSpec spec;
  std::optional<std::uint64_t> seed;
};

void run_synth(SynthArgs a) {
  if (!a.spec.identity) a.spec.seed = require_seed(a.seed, "synth");
  const Trajectory source = read_trajectory(a.trajectory);
  SceneMeshes scene;
  for (const std::string& entry : a.scene) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) fail(ErrorCode::Usage, "--scene expects id=mesh.obj, got '" + entry + "'");
    scene[entry.substr(0, eq)] = read_obj(entry.substr(eq + 1));
  }
  const RobotModel model = load_urdf(a.model);
  const SynthesisResult result = synthesize(source, a.spec, scene, model);
  for (std::size_t i = 0; i < result.trajectories.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "synth_%04zu.jsonl", i);
    write_text_file(std::filesystem::path(a.out_dir) / name, format_trajectory(result.trajectories[i]));
  }
}

struct ExportArgs {
  std::string model, object, object_id, out_dir;
  std::vector<std::string> trajectories;
  std::size_t n_points = 512;
  std::optional<std::uint64_t> seed;
};

void run_export(const ExportArgs& a) {
  const std::uint64_t seed = require_seed(a.seed, "export");
  const RobotModel model = load_urdf(a.model);
  const TriMesh object = read_obj(a.object);
  std::vector<Trajectory> trajs;
  for (const std::string& path : a.trajectories) trajs.push_back(read_trajectory(path));
  export_training_set(trajs, model, object, a.object_id, a.n_points, seed, a.out_dir);
}

struct GravityArgs {
  std::vector<double> gravity;
  std::string trajectory, out;
};

void run_calib_gravity(const GravityArgs& a) {
  const RigidTransform R = gravity_rotation(Vec3(a.gravity[0], a.gravity[1], a.gravity[2]));
  if (!a.trajectory.empty()) {
    if (a.out.empty()) fail(ErrorCode::Usage, "--trajectory needs --out");
    write_text_file(a.out, format_trajectory(align_trajectory(read_trajectory(a.trajectory), R)));
  }
  std::cout << Json{{"rotation", transform_to_json(R)}}.dump() << "\n";
}

struct ScaleArgs {
  std::string mesh, intrinsics, poses, out;
  std::vector<std::string> masks;
  std::vector<double> candidates;
  std::size_t samples = 50000;
  int dilation = 1;
  std::optional<std::uint64_t> seed;
};

void run_scale_search(const ScaleArgs& a) {
  ScaleSearchOptions options;
  options.seed = require_seed(a.seed, "scale-search");
  options.samples = a.samples;
  options.dilation = a.dilation;
  const TriMesh mesh = read_obj(a.mesh);
  const CameraIntrinsics K = read_intrinsics(a.intrinsics);
  std::vector<MaskImage> masks;
  for (const std::string& path : a.masks) masks.push_back(read_pgm(path));
  const Json poses = read_json_file(a.poses);
  RigidTransform camera;
  std::vector<RigidTransform> objects;
  try {
    if (poses.contains("camera")) camera = transform_from_json(poses.at("camera"));
    for (const Json& p : poses.at("objects")) objects.push_back(transform_from_json(p));
  } catch (const Json::exception& e) {
    fail(ErrorCode::IoFormat, std::string("poses: ") + e.what());
  }
  const std::vector<double> candidates = a.candidates.empty() ? default_scale_candidates() : a.candidates;
  const ScaleSearchResult r = scale_search(mesh, camera, K, masks, objects, candidates, options);
  Json j;
  j["best_scale"] = r.best_scale;
  j["candidates"] = candidates;
  j["errors"] = r.errors;
  emit(j.dump(2) + "\n", a.out);
}

}  // namespace

std::function<void()> register_commands(CLI::App& app) {
  auto selected = std::make_shared<std::function<void()>>();
  auto bind = [selected](CLI::App* sub, auto args, auto fn) {
    sub->callback([selected, args, fn] { *selected = [args, fn] { fn(*args); }; });
  };

  {
    auto a = std::make_shared<FkArgs>();
    auto* s = app.add_subcommand("fk", "Forward kinematics: link poses of a robot configuration as JSON");
    s->add_option("--model", a->model, "URDF file")->required();
    s->add_option("--q", a->q, "Robot configuration JSON (default: zero configuration)");
    s->add_option("--out", a->out, "Output file (default: stdout)");
    bind(s, a, run_fk);
  }
  {
    auto a = std::make_shared<RetargetArgs>();
    auto* s = app.add_subcommand("retarget", "Retarget human hand keypoints to a robot trajectory");
    s->add_option("--model", a->model, "URDF file")->required();
    s->add_option("--keypoints", a->keypoints, "Hand keypoints (JSON lines)")->required();
    s->add_option("--mapping", a->mapping, "Keypoint mapping JSON (default: wrist + fingertips)");
    s->add_option("--fingertips", a->fingertips, "Fingertip links for the default mapping, thumb first");
    s->add_option("--smoothness", a->smoothness, "Weight of |q_t - q_{t-1}|^2")->check(CLI::NonNegativeNumber);
    s->add_option("--max-iters", a->max_iters, "Solver iterations per frame");
    s->add_option("--out", a->out, "Output trajectory")->required();
    s->add_option("--report", a->report, "Per-frame residual report (JSON)");
    bind(s, a, run_retarget);
  }
  {
    auto a = std::make_shared<ContactArgs>();
    auto* s = app.add_subcommand("contact-opt", "Refine the grasp window [t1, t2] against target contact maps");
    s->add_option("--model", a->model, "URDF file")->required();
    s->add_option("--trajectory", a->trajectory, "Input trajectory")->required();
    s->add_option("--object", a->object, "Object mesh (OBJ, object frame)")->required();
    s->add_option("--object-id", a->object_id, "Object id in the trajectory")->required();
    s->add_option("--hand-targets", a->hand_targets, "Hand target contact map (default: heuristic)");
    s->add_option("--object-targets", a->object_targets, "Object target contact map (default: heuristic)");
    s->add_option("--c-rad", a->c_rad, "Contact radius, meters")->check(CLI::PositiveNumber);
    s->add_option("--penetration-weight", a->penetration_weight, "Penetration penalty weight")
        ->check(CLI::NonNegativeNumber);
    s->add_flag("--strict", a->strict, "Omit the penetration term");
    s->add_option("--max-iters", a->max_iters, "Optimizer iterations per frame");
    s->add_option("--t1", a->t1, "Window start (default: trajectory mark)");
    s->add_option("--t2", a->t2, "Window end (default: trajectory mark)");
    s->add_option("--out", a->out, "Output trajectory")->required();
    s->add_option("--report", a->report, "Per-frame energy report (JSON)");
    bind(s, a, run_contact_opt);
  }
  {
    auto a = std::make_shared<GraspArgs>();
    auto* s = app.add_subcommand("grasp-solve", "Recover a grasp from a robot-object distance matrix");
    s->add_option("--model", a->model, "URDF file")->required();
    s->add_option("--distances", a->distances, "Distance matrix (VMDM1)")->required();
    s->add_option("--object-points", a->object_points, "Object points (OBJ vertices, column order)")->required();
    s->add_option("--q-init", a->q_init, "Canonical configuration JSON (default: zero configuration)");
    s->add_option("--seed", a->seed, "Seed of the canonical robot point sampling");
    s->add_option("--max-iters", a->max_iters, "Solver iterations");
    s->add_option("--out", a->out, "Output GraspResult JSON (default: stdout)");
    bind(s, a, run_grasp_solve);
  }
  {
    auto a = std::make_shared<StabilityArgs>();
    auto* s = app.add_subcommand("stability", "Six-direction disturbance check of a grasp");
    s->add_option("--model", a->model, "URDF file")->required();
    s->add_option("--grasp", a->grasp, "Grasp JSON (wrist + joints, object frame)")->required();
    s->add_option("--object", a->object, "Object mesh (OBJ, object frame)")->required();
    s->add_option("--mass", a->mass, "Object mass, kg")->check(CLI::PositiveNumber);
    s->add_option("--mu", a->mu, "Friction coefficient")->check(CLI::NonNegativeNumber);
    s->add_option("--disturbance-scale", a->disturbance_scale, "Disturbance = 0.5 * mass * scale newtons");
    s->add_option("--cone-edges", a->cone_edges, "Friction cone edges")->check(CLI::Range(4, 64));
    s->add_option("--epsilon", a->epsilon, "Contact distance, meters")->check(CLI::PositiveNumber);
    s->add_option("--max-normal-force", a->max_normal_force, "Per-contact normal force bound (default 2 m g)");
    s->add_option("--out", a->out, "Output report (default: stdout)");
    bind(s, a, run_stability);
  }
  {
    auto a = std::make_shared<SegmentArgs>();
    auto* s = app.add_subcommand("segment", "Find the grasp stage marks t1 and t2");
    s->add_option("--model", a->model, "URDF file")->required();
    s->add_option("--trajectory", a->trajectory, "Input trajectory")->required();
    s->add_option("--object", a->object, "Object mesh (OBJ, object frame)")->required();
    s->add_option("--object-id", a->object_id, "Object id in the trajectory")->required();
    s->add_option("--fingertips", a->fingertips, "Fingertip links (default: leaf links)");
    s->add_option("--d-approach", a->d_approach, "Approach distance, meters")->check(CLI::PositiveNumber);
    s->add_option("--contact-eps", a->contact_eps, "Contact distance, meters")->check(CLI::PositiveNumber);
    s->add_option("--motion-eps", a->motion_eps, "Object motion threshold per frame, meters");
    s->add_option("--out", a->out, "Write the trajectory with marks set");
    bind(s, a, run_segment);
  }
  {
    auto a = std::make_shared<SynthArgs>();
    auto* s = app.add_subcommand("synth", "Synthesize spatially randomized demonstrations");
    s->add_option("--model", a->model, "URDF file")->required();
    s->add_option("--trajectory", a->trajectory, "Stage-marked source trajectory")->required();
    s->add_option("--scene", a->scene, "Scene meshes as id=mesh.obj");
    s->add_option("--target", a->spec.target_object, "Target object id")->required();
    s->add_option("--count", a->spec.count, "Number of trajectories")->check(CLI::PositiveNumber);
    s->add_option("--seed", a->seed, "Base seed (sample i uses seed + i)");
    s->add_option("--x-min", a->spec.x_min);
    s->add_option("--x-max", a->spec.x_max);
    s->add_option("--y-min", a->spec.y_min);
    s->add_option("--y-max", a->spec.y_max);
    s->add_option("--yaw-min", a->spec.yaw_min);
    s->add_option("--yaw-max", a->spec.yaw_max);
    s->add_flag("--full-rotation", a->spec.full_rotation, "Sample rotations from all of SO(3)");
    s->add_flag("--identity", a->spec.identity, "Use the identity transform for every sample");
    s->add_option("--d-approach", a->spec.d_approach, "Interaction range is 3 * d-approach");
    s->add_option("--clearance", a->spec.clearance, "Wrist clearance in regenerated frames, meters");
    s->add_option("--max-retries", a->spec.max_retries, "Rejected draws allowed per sample");
    s->add_option("--method", a->spec.method, "Motion regeneration method (interpolate)");
    s->add_option("--out-dir", a->out_dir, "Output directory (synth_0000.jsonl, ...)")->required();
    bind(s, a, run_synth);
  }
  {
    auto a = std::make_shared<ExportArgs>();
    auto* s = app.add_subcommand("export", "Write a policy training set from stage-marked trajectories");
    s->add_option("--model", a->model, "URDF file")->required();
    s->add_option("--trajectories", a->trajectories, "Trajectory files")->required();
    s->add_option("--object", a->object, "Object mesh (OBJ, object frame)")->required();
    s->add_option("--object-id", a->object_id, "Object id in the trajectories")->required();
    s->add_option("--n-points", a->n_points, "Points per cloud");
    s->add_option("--seed", a->seed, "Point sampling seed");
    s->add_option("--out-dir", a->out_dir, "Output directory")->required();
    bind(s, a, run_export);
  }
  {
    auto a = std::make_shared<GravityArgs>();
    auto* s = app.add_subcommand("calib-gravity", "Rotate gravity onto -z and align a trajectory");
    s->add_option("--gravity", a->gravity, "Gravity direction in the camera frame (x y z)")->required()->expected(3);
    s->add_option("--trajectory", a->trajectory, "Trajectory to align");
    s->add_option("--out", a->out, "Aligned trajectory");
    bind(s, a, run_calib_gravity);
  }
  {
    auto a = std::make_shared<ScaleArgs>();
    auto* s = app.add_subcommand("scale-search", "Pick the object scale whose silhouettes best match the masks");
    s->add_option("--mesh", a->mesh, "Object mesh (OBJ)")->required();
    s->add_option("--intrinsics", a->intrinsics, "Camera intrinsics JSON")->required();
    s->add_option("--masks", a->masks, "Mask images (PGM), one per frame")->required();
    s->add_option("--poses", a->poses, "Camera and per-frame object poses JSON")->required();
    s->add_option("--candidates", a->candidates, "Candidate scales (default 0.5, 0.6, ..., 2.0)");
    s->add_option("--samples", a->samples, "Surface samples");
    s->add_option("--dilation", a->dilation, "Silhouette dilation, pixels");
    s->add_option("--seed", a->seed, "Surface sampling seed");
    s->add_option("--out", a->out, "Output JSON (default: stdout)");
    bind(s, a, run_scale_search);
  }
  return [selected] {
    if (*selected) (*selected)();
  };
}

}  // namespace dexrecon::cli
