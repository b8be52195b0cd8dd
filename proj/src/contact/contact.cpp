#include "dexrecon/contact/contact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "dexrecon/error.hpp"
#include "dexrecon/robot/config_space.hpp"

namespace dexrecon {

namespace {

void check_radius(double c_rad) {
  if (!(c_rad > 0.0) || !std::isfinite(c_rad)) fail(ErrorCode::NonPositiveRadius, "c_rad must be positive");
}

double falloff(double d, double c_rad) { return std::max(0.0, 1.0 - d / c_rad); }

struct Box {
  Vec3 lo, hi;
};

Box bounds(std::span<const Vec3> points, double pad) {
  Box b{points[0], points[0]};
  for (const Vec3& p : points) {
    b.lo = b.lo.cwiseMin(p);
    b.hi = b.hi.cwiseMax(p);
  }
  b.lo.array() -= pad;
  b.hi.array() += pad;
  return b;
}

bool inside(const Box& b, const Vec3& p) {
  return (p.array() >= b.lo.array()).all() && (p.array() <= b.hi.array()).all();
}

// Map values of `subject` against an index over `other`. Subject points
// outside the padded bounds of `other` are more than c_rad away along some
// axis and are 0 without a query.
std::vector<double> map_values(std::span<const Vec3> subject, const NearestIndex& other, const Box& other_box,
                               double c_rad) {
  std::vector<double> values(subject.size(), 0.0);
  for (std::size_t i = 0; i < subject.size(); ++i) {
    if (!inside(other_box, subject[i])) continue;
    values[i] = falloff(other.nearest(subject[i]).distance, c_rad);
  }
  return values;
}

double abs_mismatch(const std::vector<double>& values, const std::vector<double>& target) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += std::abs(values[i] - target[i]);
  return sum;
}

// Object-side map values against a posed hand. Only object vertices within
// c_rad of some hand vertex can be nonzero; those are found by radius
// queries from the hand vertices near the object, then evaluated exactly.
std::vector<double> object_map_values(std::span<const Vec3> hand, std::span<const Vec3> object_vertices,
                                      const NearestIndex& object_index, const Box& object_box, double c_rad) {
  std::vector<double> values(object_vertices.size(), 0.0);
  std::vector<std::size_t> found;
  std::vector<char> candidate(object_vertices.size(), 0);
  for (const Vec3& h : hand) {
    if (!inside(object_box, h)) continue;
    found.clear();
    object_index.within(h, c_rad, found);
    for (std::size_t o : found) candidate[o] = 1;
  }
  std::optional<NearestIndex> hand_index;
  for (std::size_t o = 0; o < object_vertices.size(); ++o) {
    if (!candidate[o]) continue;
    if (!hand_index) hand_index.emplace(hand);
    values[o] = falloff(hand_index->nearest(object_vertices[o]).distance, c_rad);
  }
  return values;
}

}  // namespace

ContactMap contact_map(std::span<const Vec3> subject, std::span<const Vec3> other, double c_rad) {
  check_radius(c_rad);
  if (subject.empty() || other.empty()) fail(ErrorCode::EmptyMesh, "contact map needs two nonempty meshes");
  const NearestIndex index(other);
  return {c_rad, map_values(subject, index, bounds(other, c_rad), c_rad)};
}

ContactMap contact_map(const TriMesh& subject, const TriMesh& other, double c_rad) {
  return contact_map(std::span<const Vec3>(subject.vertices()), std::span<const Vec3>(other.vertices()), c_rad);
}

std::vector<double> penetration_depths(std::span<const Vec3> hand, const NearestIndex& object_index,
                                       std::span<const Vec3> object_vertices,
                                       std::span<const Vec3> object_normals) {
  std::vector<double> depth(hand.size(), 0.0);
  if (object_vertices.empty()) return depth;
  const Box object_box = bounds(object_vertices, 0.0);
  for (std::size_t i = 0; i < hand.size(); ++i) {
    if (!inside(object_box, hand[i])) continue;
    const std::size_t o = object_index.nearest(hand[i]).index;
    depth[i] = std::max(0.0, -(hand[i] - object_vertices[o]).dot(object_normals[o]));
  }
  return depth;
}

namespace {

ContactEnergyTerms energy_terms(const std::vector<Vec3>& hand, std::span<const Vec3> object_vertices,
                                std::span<const Vec3> object_normals, const NearestIndex& object_index,
                                const Box& object_box, const ContactTargets& targets,
                                const ContactEnergyOptions& options) {
  if (hand.empty()) fail(ErrorCode::EmptyMesh, "robot mesh is empty");
  if (targets.hand.size() != hand.size() || targets.object.size() != object_vertices.size()) {
    fail(ErrorCode::DimensionMismatch, "contact target lengths differ from mesh vertex counts");
  }
  ContactEnergyTerms terms;
  terms.object_term =
      abs_mismatch(object_map_values(hand, object_vertices, object_index, object_box, options.c_rad), targets.object);
  // One nearest query per hand vertex inside the padded box serves both the
  // hand map and the penetration depth.
  const Box tight{(object_box.lo.array() + options.c_rad).matrix(), (object_box.hi.array() - options.c_rad).matrix()};
  for (std::size_t i = 0; i < hand.size(); ++i) {
    double value = 0.0;
    if (inside(object_box, hand[i])) {
      const NearestHit hit = object_index.nearest(hand[i]);
      value = falloff(hit.distance, options.c_rad);
      if (!options.strict_formula && inside(tight, hand[i])) {
        const double d = std::max(0.0, -(hand[i] - object_vertices[hit.index]).dot(object_normals[hit.index]));
        terms.penetration += d;
        terms.max_penetration = std::max(terms.max_penetration, d);
      }
    }
    terms.hand_term += std::abs(value - targets.hand[i]);
  }
  terms.total = terms.object_term + terms.hand_term;
  if (!options.strict_formula) terms.total += options.penetration_weight * terms.penetration;
  return terms;
}

const std::vector<Vec3>& nonempty_vertices(const TriMesh& mesh) {
  if (mesh.empty()) fail(ErrorCode::EmptyMesh, "object mesh is empty");
  return mesh.vertices();
}

void check_options(const ContactEnergyOptions& options) {
  check_radius(options.c_rad);
  if (!(options.penetration_weight >= 0.0)) fail(ErrorCode::InvalidArgument, "penetration weight must be >= 0");
}

}  // namespace

ContactEnergyTerms contact_energy_terms(const TriMesh& hand, const TriMesh& object, const ContactTargets& targets,
                                        const ContactEnergyOptions& options) {
  check_options(options);
  if (object.empty()) fail(ErrorCode::EmptyMesh, "object mesh is empty");
  const NearestIndex object_index(object.vertices());
  const std::vector<Vec3> normals = vertex_normals(object);
  return energy_terms(hand.vertices(), object.vertices(), normals, object_index,
                      bounds(object.vertices(), options.c_rad), targets, options);
}

ContactObjective::ContactObjective(const RobotModel& model, const TriMesh& object, ContactTargets targets,
                                   const ContactEnergyOptions& options)
    : model_(&model),
      object_vertices_(nonempty_vertices(object)),
      object_normals_(vertex_normals(object)),
      object_index_(object_vertices_),
      targets_(std::move(targets)),
      options_(options) {
  check_options(options_);
}

ContactEnergyTerms ContactObjective::evaluate_vertices(const std::vector<Vec3>& hand) const {
  return energy_terms(hand, object_vertices_, object_normals_, object_index_,
                      bounds(object_vertices_, options_.c_rad), targets_, options_);
}

ContactEnergyTerms ContactObjective::evaluate(const RobotConfig& q) const {
  return evaluate_vertices(robot_vertices_at(*model_, q));
}

std::pair<ContactMap, ContactMap> ContactObjective::maps(const RobotConfig& q) const {
  const std::vector<Vec3> hand = robot_vertices_at(*model_, q);
  const Box object_box = bounds(object_vertices_, options_.c_rad);
  ContactMap hand_map{options_.c_rad, map_values(hand, object_index_, object_box, options_.c_rad)};
  ContactMap object_map{options_.c_rad,
                        object_map_values(hand, object_vertices_, object_index_, object_box, options_.c_rad)};
  return {std::move(hand_map), std::move(object_map)};
}

Eigen::VectorXd ContactObjective::gradient(const RobotConfig& q, double h) const {
  const Eigen::Index n = static_cast<Eigen::Index>(6 + model_->dof());
  Eigen::VectorXd g(n);
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    delta[i] = h;
    const double plus = energy(retract(q, delta));
    delta[i] = -h;
    const double minus = energy(retract(q, delta));
    delta[i] = 0.0;
    g[i] = (plus - minus) / (2.0 * h);
  }
  return g;
}

double contact_energy(const RobotModel& model, const RobotConfig& q, const TriMesh& object,
                      const ContactTargets& targets, double c_rad, double penetration_weight) {
  model.check_dimension(q);
  ContactEnergyOptions options;
  options.c_rad = c_rad;
  options.penetration_weight = penetration_weight;
  return ContactObjective(model, object, targets, options).energy(q);
}

namespace {

RobotConfig clamped(const RobotModel& model, RobotConfig q) {
  model.clamp_to_limits(q.joint_angles);
  return q;
}

}  // namespace

ContactOptResult optimize_contact(const RobotModel& model, const RobotConfig& q_init, const TriMesh& object,
                                  const ContactTargets& targets, const ContactEnergyOptions& energy_options,
                                  const ContactOptOptions& options) {
  model.check_dimension(q_init);
  if (options.max_iterations < 0 || !(options.initial_step > 0.0) || !(options.shrink > 0.0 && options.shrink < 1.0)) {
    fail(ErrorCode::InvalidArgument, "invalid contact optimizer options");
  }
  const ContactObjective objective(model, object, targets, energy_options);

  ContactOptResult result;
  result.config = q_init;
  double energy = objective.energy(q_init);
  result.energy_trace.push_back(energy);
  double step = options.initial_step;

  for (int iter = 0; iter < options.max_iterations && energy > 0.0 && step >= options.min_step; ++iter) {
    result.iterations = iter + 1;
    const Eigen::VectorXd g = objective.gradient(result.config, options.fd_step);
    const double g_max = g.cwiseAbs().maxCoeff();
    if (!(g_max > 0.0)) break;
    const Eigen::VectorXd direction = -g / g_max;  // unit max-norm
    const double slope = g.dot(direction);

    bool accepted = false;
    while (step >= options.min_step) {
      const RobotConfig trial = clamped(model, retract(result.config, step * direction));
      const double trial_energy = objective.energy(trial);
      if (trial_energy <= energy + options.armijo * step * slope && trial_energy < energy) {
        result.config = trial;
        energy = trial_energy;
        result.energy_trace.push_back(energy);
        ++result.accepted_steps;
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= options.shrink;
    }
    if (!accepted) break;
  }
  return result;
}

ContactTargets heuristic_targets(const RobotModel& model, const RobotConfig& q, const TriMesh& object, double c_rad,
                                 const HeuristicTargetOptions& options) {
  check_radius(c_rad);
  if (object.empty()) fail(ErrorCode::EmptyMesh, "object mesh is empty");
  std::vector<bool> is_tip(model.links().size(), false);
  if (options.fingertip_links.empty()) {
    for (std::size_t l : model.leaf_links()) is_tip[l] = true;
  } else {
    for (const std::string& name : options.fingertip_links) is_tip[model.require_link(name)] = true;
  }

  const RobotMesh hand = robot_mesh_at(model, q);
  const auto& hv = hand.mesh.vertices();
  const auto& ov = object.vertices();
  ContactTargets targets{std::vector<double>(hv.size(), 0.0), std::vector<double>(ov.size(), 0.0)};
  const NearestIndex object_index(ov);
  const std::size_t k = std::min(options.k_nearest, ov.size());
  std::vector<std::size_t> order(ov.size());
  std::vector<double> dist(ov.size());

  for (std::size_t i = 0; i < hv.size(); ++i) {
    if (!is_tip[hand.vertex_link[i]]) continue;
    if (!(object_index.nearest(hv[i]).distance < 3.0 * c_rad)) continue;
    targets.hand[i] = 1.0;
    if (k == 0) continue;
    for (std::size_t j = 0; j < ov.size(); ++j) dist[j] = (ov[j] - hv[i]).squaredNorm();
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1), order.end(),
                     [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });
    for (std::size_t j = 0; j < k; ++j) targets.object[order[j]] = 1.0;
  }
  return targets;
}

}  // namespace dexrecon
