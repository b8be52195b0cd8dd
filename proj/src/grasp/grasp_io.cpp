#include "dexrecon/error.hpp"
#include "dexrecon/grasp/grasp.hpp"
#include "dexrecon/io/json_util.hpp"

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

Json contacts_json(std::span<const Contact> contacts) {
  Json out = Json::array();
  for (const Contact& c : contacts) {
    Json rec;
    rec["point"] = vec3_to_json(c.point);
    rec["normal"] = vec3_to_json(c.normal);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::string format_stability_report(const StabilityReport& report) {
  Json j;
  Json dirs = Json::object();
  for (std::size_t k = 0; k < 6; ++k) dirs[kDisturbanceDirections[k]] = report.resisted[k];
  j["success"] = report.success;
  j["directions"] = std::move(dirs);
  j["mu"] = report.mu;
  j["disturbance_newtons"] = report.disturbance_newtons;
  j["max_normal_force"] = report.max_normal_force;
  j["cone_edges"] = report.cone_edges;
  j["centroid"] = vec3_to_json(report.centroid);
  j["contacts"] = contacts_json(report.contacts);
  j["protocol"] = {{"steps", report.protocol_steps},
                   {"displacement_threshold", report.protocol_displacement_threshold}};
  return j.dump(2) + "\n";
}

std::string format_grasp_result(const GraspResult& result, const std::vector<std::string>& joint_names) {
  Json j;
  j["wrist"] = transform_to_json(result.wrist_pose);
  j["joint_names"] = joint_names;
  j["joints"] = result.config.joint_angles;
  j["fit_rms"] = result.fit_rms;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["placed_points"] = flat_points(result.placed_cloud.points);
  j["multilateration_residuals"] = result.multilateration_residuals;
  return j.dump() + "\n";
}

std::string format_contacts(std::span<const Contact> contacts) {
  Json j;
  j["contacts"] = contacts_json(contacts);
  return j.dump(2) + "\n";
}

std::vector<Contact> parse_contacts(const std::string& text) {
  const Json j = parse_json(text, "contacts");
  std::vector<Contact> out;
  try {
    for (const Json& c : j.at("contacts")) {
      out.push_back({vec3_from_json(c.at("point")), vec3_from_json(c.at("normal"))});
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::IoFormat, std::string("contacts: ") + e.what());
  }
  return out;
}

}  // namespace dexrecon
