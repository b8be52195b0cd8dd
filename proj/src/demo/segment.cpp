#include <algorithm>
#include <limits>

#include "dexrecon/demo/demo.hpp"
#include "dexrecon/error.hpp"
#include "dexrecon/geom/mesh_distance.hpp"

namespace dexrecon {

namespace {

const RigidTransform& object_pose(const Trajectory& traj, const std::string& id, std::size_t t) {
  const auto it = traj.frames[t].objects.find(id);
  if (it == traj.frames[t].objects.end()) {
    fail(ErrorCode::MissingPose, "object '" + id + "' has no pose in frame " + std::to_string(t));
  }
  return it->second;
}

}  // namespace

std::vector<std::vector<double>> fingertip_distances(const Trajectory& traj, const std::string& object_id,
                                                     const TriMesh& object, const RobotModel& model,
                                                     const std::vector<std::size_t>& links) {
  const MeshDistance surface(object);
  std::vector<std::vector<double>> out;
  out.reserve(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    // Query in the object frame so the distance structure is built once.
    const RigidTransform to_object = object_pose(traj, object_id, t).inverse();
    const KinematicState state = compute_kinematics(model, traj.frames[t].config);
    std::vector<double> row;
    for (std::size_t link : links) {
      const RigidTransform T = to_object * state.link_poses[link];
      double best = std::numeric_limits<double>::infinity();
      for (const Vec3& v : model.link_mesh(link).vertices()) best = std::min(best, surface.distance(T.apply(v)));
      row.push_back(best);
    }
    out.push_back(std::move(row));
  }
  return out;
}

double object_motion(const Trajectory& traj, const std::string& object_id, const TriMesh& object, std::size_t t) {
  const RigidTransform& a = object_pose(traj, object_id, t);
  const RigidTransform& b = object_pose(traj, object_id, t + 1);
  double best = 0.0;
  for (const Vec3& v : object.vertices()) best = std::max(best, (b.apply(v) - a.apply(v)).norm());
  return best;
}

StageMarks segment_stages(const Trajectory& traj, const std::string& object_id, const TriMesh& object,
                          const RobotModel& model, const SegmentOptions& options) {
  traj.validate();
  if (traj.size() < 3) fail(ErrorCode::InvalidArgument, "segmentation needs at least 3 frames");
  std::vector<std::size_t> links;
  if (options.fingertip_links.empty()) {
    links = model.leaf_links();
  } else {
    for (const auto& name : options.fingertip_links) links.push_back(model.require_link(name));
  }
  std::erase_if(links, [&](std::size_t l) { return model.link_mesh(l).empty(); });
  if (links.empty()) fail(ErrorCode::MissingGeometry, "no fingertip link has geometry");

  const auto dist = fingertip_distances(traj, object_id, object, model, links);
  std::optional<std::size_t> t1;
  for (std::size_t t = 0; t < traj.size() && !t1; ++t) {
    if (*std::min_element(dist[t].begin(), dist[t].end()) < options.d_approach) t1 = t;
  }
  if (!t1) fail(ErrorCode::NoApproach, "the hand never comes within d_approach of the object");

  std::optional<std::size_t> last_contact;
  for (std::size_t t = *t1; t < traj.size(); ++t) {
    const auto touching = std::count_if(dist[t].begin(), dist[t].end(), [&](double d) { return d < options.contact_eps; });
    if (touching < 2) continue;
    last_contact = t;
    if (t + 1 < traj.size() && object_motion(traj, object_id, object, t) > options.motion_eps) return {*t1, t};
  }
  if (!last_contact) fail(ErrorCode::NoApproach, "no frame with two fingertips in contact after approach");
  return {*t1, *last_contact};
}

}  // namespace dexrecon
