#include "dexrecon/robot/urdf.hpp"

#include <cmath>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "dexrecon/error.hpp"
#include "dexrecon/geom/obj_io.hpp"
#include "dexrecon/io/json_util.hpp"

namespace dexrecon {

namespace pt = boost::property_tree;

namespace {

std::optional<std::string> attribute(const pt::ptree& node, const std::string& name) {
  if (auto v = node.get_optional<std::string>("<xmlattr>." + name)) return *v;
  return std::nullopt;
}

std::string require_attribute(const pt::ptree& node, const std::string& element, const std::string& name) {
  if (auto v = attribute(node, name)) return *v;
  fail(ErrorCode::MalformedXml, "<" + element + "> is missing attribute '" + name + "'");
}

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const std::string& what) {
  std::istringstream in(text);
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      fail(ErrorCode::MalformedXml, "bad number '" + token + "' in " + what);
    }
  }
  if (out.size() != expected) {
    fail(ErrorCode::MalformedXml, what + " expects " + std::to_string(expected) + " numbers");
  }
  return out;
}

Vec3 parse_vec3(const std::string& text, const std::string& what) {
  const auto v = parse_numbers(text, 3, what);
  return Vec3(v[0], v[1], v[2]);
}

RigidTransform parse_origin(const pt::ptree& parent) {
  const auto origin = parent.get_child_optional("origin");
  if (!origin) return RigidTransform::identity();
  const Vec3 xyz = attribute(*origin, "xyz") ? parse_vec3(*attribute(*origin, "xyz"), "origin xyz") : Vec3::Zero();
  const Vec3 rpy = attribute(*origin, "rpy") ? parse_vec3(*attribute(*origin, "rpy"), "origin rpy") : Vec3::Zero();
  return RigidTransform::from_rpy(rpy, xyz);
}

std::filesystem::path resolve_mesh_path(std::string filename, const std::optional<std::filesystem::path>& base) {
  for (const std::string prefix : {"package://", "file://"}) {
    if (filename.rfind(prefix, 0) == 0) filename = filename.substr(prefix.size());
  }
  std::filesystem::path p(filename);
  if (p.is_relative() && base) p = *base / p;
  return p;
}

Geometry parse_geometry(const pt::ptree& element, const std::string& link,
                        const std::optional<std::filesystem::path>& base,
                        std::vector<std::string>& warnings) {
  Geometry g;
  g.origin = parse_origin(element);
  const auto geometry = element.get_child_optional("geometry");
  if (!geometry) fail(ErrorCode::MalformedXml, "link " + link + ": geometry element missing");
  if (auto box = geometry->get_child_optional("box")) {
    g.shape = BoxShape{parse_vec3(require_attribute(*box, "box", "size"), "box size")};
  } else if (auto sphere = geometry->get_child_optional("sphere")) {
    g.shape = SphereShape{parse_numbers(require_attribute(*sphere, "sphere", "radius"), 1, "sphere radius")[0]};
  } else if (auto cyl = geometry->get_child_optional("cylinder")) {
    g.shape = CylinderShape{parse_numbers(require_attribute(*cyl, "cylinder", "radius"), 1, "cylinder radius")[0],
                            parse_numbers(require_attribute(*cyl, "cylinder", "length"), 1, "cylinder length")[0]};
  } else if (auto mesh = geometry->get_child_optional("mesh")) {
    MeshShape shape;
    shape.filename = require_attribute(*mesh, "mesh", "filename");
    if (auto s = attribute(*mesh, "scale")) shape.scale = parse_vec3(*s, "mesh scale");
    const auto path = resolve_mesh_path(shape.filename, base);
    if (path.extension() != ".obj" && path.extension() != ".OBJ") {
      warnings.push_back("link " + link + ": only OBJ meshes are supported, skipping " + shape.filename);
    } else if (base && std::filesystem::exists(path)) {
      shape.mesh = std::make_shared<const TriMesh>(read_obj(path));
    }
    g.shape = std::move(shape);
  } else {
    fail(ErrorCode::MalformedXml, "link " + link + ": unsupported geometry");
  }
  return g;
}

Link parse_link(const pt::ptree& node, const std::optional<std::filesystem::path>& base,
                std::vector<std::string>& warnings) {
  Link link;
  link.name = require_attribute(node, "link", "name");
  std::vector<Geometry> collision, visual;
  for (const auto& [tag, child] : node) {
    if (tag == "collision") collision.push_back(parse_geometry(child, link.name, base, warnings));
    if (tag == "visual") visual.push_back(parse_geometry(child, link.name, base, warnings));
  }
  link.geometries = collision.empty() ? std::move(visual) : std::move(collision);
  return link;
}

Joint parse_joint(const pt::ptree& node, std::vector<std::string>& warnings) {
  Joint joint;
  joint.name = require_attribute(node, "joint", "name");
  const std::string type = require_attribute(node, "joint", "type");
  if (type == "revolute") joint.type = JointType::Revolute;
  else if (type == "continuous") joint.type = JointType::Continuous;
  else if (type == "prismatic") joint.type = JointType::Prismatic;
  else if (type == "fixed") joint.type = JointType::Fixed;
  else fail(ErrorCode::InvalidArgument, "joint " + joint.name + ": unsupported type '" + type + "'");

  const auto parent = node.get_child_optional("parent");
  const auto child = node.get_child_optional("child");
  if (!parent || !child) fail(ErrorCode::MalformedXml, "joint " + joint.name + " needs <parent> and <child>");
  joint.parent = require_attribute(*parent, "parent", "link");
  joint.child = require_attribute(*child, "child", "link");
  joint.origin = parse_origin(node);
  if (auto axis = node.get_child_optional("axis")) {
    joint.axis = parse_vec3(require_attribute(*axis, "axis", "xyz"), "axis xyz");
  }
  if (auto limit = node.get_child_optional("limit")) {
    joint.lower = attribute(*limit, "lower") ? parse_numbers(*attribute(*limit, "lower"), 1, "limit lower")[0] : 0.0;
    joint.upper = attribute(*limit, "upper") ? parse_numbers(*attribute(*limit, "upper"), 1, "limit upper")[0] : 0.0;
  } else if (joint.type == JointType::Revolute || joint.type == JointType::Prismatic) {
    joint.has_limits = false;
    warnings.push_back("joint " + joint.name + " has no <limit>; treating it as unbounded");
  }
  if (node.get_child_optional("mimic")) {
    warnings.push_back("joint " + joint.name + ": <mimic> is not supported and was ignored");
  }
  return joint;
}

std::string rpy_string(const RigidTransform& T) {
  const Mat3 R = T.rotation_matrix();
  const double pitch = std::asin(std::clamp(-R(2, 0), -1.0, 1.0));
  const double roll = std::atan2(R(2, 1), R(2, 2));
  const double yaw = std::atan2(R(1, 0), R(0, 0));
  return format_double(roll) + " " + format_double(pitch) + " " + format_double(yaw);
}

std::string vec_string(const Vec3& v) {
  return format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z());
}

}  // namespace

RobotModel parse_urdf(std::string_view text, const std::optional<std::filesystem::path>& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    fail(ErrorCode::MalformedXml, std::string("URDF is not well-formed XML: ") + e.what());
  }
  const auto robot = tree.get_child_optional("robot");
  if (!robot) fail(ErrorCode::MalformedXml, "URDF has no <robot> element");

  std::vector<std::string> warnings;
  std::vector<Link> links;
  std::vector<Joint> joints;
  for (const auto& [tag, child] : *robot) {
    if (tag == "link") links.push_back(parse_link(child, base_dir, warnings));
    else if (tag == "joint") joints.push_back(parse_joint(child, warnings));
    else if (tag == "transmission" || tag == "gazebo") warnings.push_back("<" + tag + "> ignored");
  }
  return RobotModel(std::move(links), std::move(joints), std::move(warnings));
}

RobotModel load_urdf(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return parse_urdf(text, std::filesystem::absolute(path).parent_path());
}

std::string format_urdf(const RobotModel& model, const std::string& robot_name) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\"?>\n<robot name=\"" << robot_name << "\">\n";
  for (const Link& link : model.links()) {
    out << "  <link name=\"" << link.name << "\">\n";
    for (const Geometry& g : link.geometries) {
      out << "    <collision>\n      <origin xyz=\"" << vec_string(g.origin.translation())
          << "\" rpy=\"" << rpy_string(g.origin) << "\"/>\n      <geometry>\n        ";
      std::visit(
          [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, BoxShape>) out << "<box size=\"" << vec_string(s.size) << "\"/>";
            else if constexpr (std::is_same_v<S, SphereShape>) out << "<sphere radius=\"" << format_double(s.radius) << "\"/>";
            else if constexpr (std::is_same_v<S, CylinderShape>)
              out << "<cylinder radius=\"" << format_double(s.radius) << "\" length=\"" << format_double(s.length) << "\"/>";
            else out << "<mesh filename=\"" << s.filename << "\" scale=\"" << vec_string(s.scale) << "\"/>";
          },
          g.shape);
      out << "\n      </geometry>\n    </collision>\n";
    }
    out << "  </link>\n";
  }
  for (const Joint& j : model.joints()) {
    const char* type = j.type == JointType::Revolute ? "revolute"
                       : j.type == JointType::Continuous ? "continuous"
                       : j.type == JointType::Prismatic ? "prismatic" : "fixed";
    out << "  <joint name=\"" << j.name << "\" type=\"" << type << "\">\n"
        << "    <parent link=\"" << j.parent << "\"/>\n"
        << "    <child link=\"" << j.child << "\"/>\n"
        << "    <origin xyz=\"" << vec_string(j.origin.translation()) << "\" rpy=\"" << rpy_string(j.origin) << "\"/>\n";
    if (j.movable()) out << "    <axis xyz=\"" << vec_string(j.axis) << "\"/>\n";
    if (j.limited()) {
      out << "    <limit lower=\"" << format_double(j.lower) << "\" upper=\"" << format_double(j.upper)
          << "\" effort=\"1\" velocity=\"1\"/>\n";
    }
    out << "  </joint>\n";
  }
  out << "</robot>\n";
  return out.str();
}

}  // namespace dexrecon
