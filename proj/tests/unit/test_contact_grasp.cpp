#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dexrecon/contact/contact.hpp"
#include "dexrecon/error.hpp"
#include "dexrecon/geom/mesh_distance.hpp"
#include "dexrecon/geom/primitives.hpp"
#include "dexrecon/geom/sampling.hpp"
#include "dexrecon/grasp/grasp.hpp"
#include "dexrecon/grasp/lp.hpp"
#include "dexrecon/robot/kinematics.hpp"
#include "fixtures.hpp"

using namespace dexrecon;

namespace {

std::vector<Vec3> random_points(Rng& rng, std::size_t n, double extent = 1.0) {
  std::vector<Vec3> out(n);
  for (Vec3& p : out) p = Vec3(rng.uniform(-extent, extent), rng.uniform(-extent, extent), rng.uniform(-extent, extent));
  return out;
}

}  // namespace

TEST(ContactMap, KnownValues) {
  const std::vector<Vec3> subject{Vec3(0, 0, 0), Vec3(0.005, 0, 0), Vec3(0.02, 0, 0)};
  const std::vector<Vec3> other{Vec3(0, 0, 0.002)};
  const ContactMap m = contact_map(subject, other, 0.01);
  EXPECT_DOUBLE_EQ(m.values[0], 1.0 - 0.002 / 0.01);
  EXPECT_DOUBLE_EQ(m.values[1], 1.0 - std::sqrt(0.005 * 0.005 + 0.002 * 0.002) / 0.01);
  EXPECT_EQ(m.values[2], 0.0);
  EXPECT_THROW(contact_map(subject, other, 0.0), Error);
  EXPECT_THROW(contact_map(subject, std::vector<Vec3>{}, 0.01), Error);
}

TEST(ContactMap, IoRoundTripAndLengthCheck) {
  const ContactMap m{0.01, {0.0, 0.25, 1.0}};
  const ContactMap back = parse_contact_map(format_contact_map(m), 3);
  EXPECT_EQ(back.values, m.values);
  EXPECT_EQ(back.c_rad, m.c_rad);
  try {
    parse_contact_map(format_contact_map(m), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  EXPECT_THROW(parse_contact_map(R"({"c_rad":0.01,"values":[1.5]})"), Error);
}

TEST(ContactEnergy, ZeroAtOwnMapsAndPenetrationCounted) {
  const TriMesh object = make_uv_sphere(0.05, 30, 30);
  const TriMesh hand = transformed(make_uv_sphere(0.01, 10, 10), RigidTransform::from_translation(Vec3(0, 0, 0.0605)));
  ContactTargets targets{contact_map(hand, object, 0.01).values, contact_map(object, hand, 0.01).values};
  const ContactEnergyTerms at_rest = contact_energy_terms(hand, object, targets);
  EXPECT_EQ(at_rest.object_term, 0.0);
  EXPECT_EQ(at_rest.hand_term, 0.0);
  EXPECT_LT(at_rest.max_penetration, 1e-3);

  const TriMesh pushed = transformed(make_uv_sphere(0.01, 10, 10), RigidTransform::from_translation(Vec3(0, 0, 0.055)));
  const ContactEnergyTerms deep = contact_energy_terms(pushed, object, targets);
  EXPECT_NEAR(deep.max_penetration, 0.005, 1e-3);
  EXPECT_GT(deep.penetration, 0.0);
  EXPECT_DOUBLE_EQ(deep.total, deep.object_term + deep.hand_term + 10.0 * deep.penetration);

  ContactEnergyOptions strict;
  strict.strict_formula = true;
  const ContactEnergyTerms s = contact_energy_terms(pushed, object, targets, strict);
  EXPECT_DOUBLE_EQ(s.total, s.object_term + s.hand_term);

  ContactTargets bad = targets;
  bad.hand.pop_back();
  EXPECT_THROW(contact_energy_terms(hand, object, bad), Error);
}

TEST(ContactEnergy, ObjectiveMatchesStandaloneEnergy) {
  const RobotModel hand = fixtures::hand_model();
  const fixtures::PinchFixture pinch = fixtures::pinch_fixture(hand, 48, 30);
  const ContactTargets targets = heuristic_targets(hand, pinch.q_star, pinch.cylinder, 0.01);
  const ContactObjective objective(hand, pinch.cylinder, targets);
  RobotConfig q = pinch.q_star;
  q.joint_angles[5] += 0.05;
  const double expected = contact_energy_terms(robot_mesh_at(hand, q).mesh, pinch.cylinder, targets).total;
  EXPECT_DOUBLE_EQ(objective.energy(q), expected);
  EXPECT_DOUBLE_EQ(contact_energy(hand, q, pinch.cylinder, targets, 0.01, 10.0), expected);
}

TEST(ContactTargets, HeuristicMarksOnlyFingertips) {
  const RobotModel hand = fixtures::hand_model();
  const fixtures::PinchFixture pinch = fixtures::pinch_fixture(hand, 48, 30);
  const ContactTargets t = heuristic_targets(hand, pinch.q_star, pinch.cylinder, 0.01);
  const RobotMesh rm = robot_mesh_at(hand, pinch.q_star);
  std::size_t marked = 0;
  for (std::size_t i = 0; i < t.hand.size(); ++i) {
    if (t.hand[i] == 0.0) continue;
    ++marked;
    const std::string& link = hand.links()[rm.vertex_link[i]].name;
    EXPECT_TRUE(link == "thumb_tip" || link == "index_tip") << link;
  }
  EXPECT_GT(marked, 0u);
  double object_marked = 0.0;
  for (double v : t.object) object_marked += v;
  EXPECT_GE(object_marked, 6.0);
}

TEST(ContactOpt, DescendsAndKeepsTraceMonotone) {
  const RobotModel hand = fixtures::hand_model();
  const fixtures::PinchFixture pinch = fixtures::pinch_fixture(hand, 48, 30);
  const RobotMesh rest = robot_mesh_at(hand, pinch.q_star);
  const ContactTargets targets{contact_map(rest.mesh, pinch.cylinder, 0.01).values,
                               contact_map(pinch.cylinder, rest.mesh, 0.01).values};
  RobotConfig q0 = pinch.q_star;
  q0.wrist = RigidTransform::from_translation(0.003 * pinch.axis) * q0.wrist;
  ContactOptOptions opts;
  opts.max_iterations = 15;
  const ContactOptResult r = optimize_contact(hand, q0, pinch.cylinder, targets, {}, opts);
  ASSERT_GE(r.energy_trace.size(), 2u);
  for (std::size_t i = 1; i < r.energy_trace.size(); ++i) EXPECT_LE(r.energy_trace[i], r.energy_trace[i - 1]);
  EXPECT_LT(r.energy_trace.back(), r.energy_trace.front());
  EXPECT_EQ(r.accepted_steps + 1, static_cast<int>(r.energy_trace.size()));
}

TEST(Lp, FeasibilityBasics) {
  Eigen::MatrixXd A(2, 3);
  A << 1, 1, 0, 0, 1, 1;
  Eigen::VectorXd b(2);
  b << 1, 2;
  const LpFeasibility ok = find_feasible_point(A, b);
  ASSERT_TRUE(ok.feasible);
  EXPECT_LT((A * ok.x - b).norm(), 1e-9);
  EXPECT_GE(ok.x.minCoeff(), 0.0);

  b << -1, 2;
  EXPECT_FALSE(find_feasible_point(A, b).feasible);
  EXPECT_THROW(find_feasible_point(A, Eigen::VectorXd::Zero(3)), Error);
}

TEST(Lp, RandomFeasibleSystems) {
  Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    Eigen::MatrixXd A(5, 12);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = rng.uniform(-1, 1);
    Eigen::VectorXd x(12);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(0, 1);
    const Eigen::VectorXd b = A * x;
    const LpFeasibility r = find_feasible_point(A, b);
    ASSERT_TRUE(r.feasible);
    EXPECT_LT((A * r.x - b).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_GE(r.x.minCoeff(), -1e-12);
  }
}

TEST(DistanceMatrix, ValidationAndBinaryRoundTrip) {
  Rng rng(32);
  const std::vector<Vec3> r = random_points(rng, 7), o = random_points(rng, 5);
  const DistanceMatrix D = distance_matrix(r, o);
  EXPECT_EQ(D(3, 2), (r[3] - o[2]).norm());
  const DistanceMatrix back = parse_distance_matrix(format_distance_matrix(D));
  ASSERT_EQ(back.rows(), 7u);
  ASSERT_EQ(back.cols(), 5u);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(back(i, j), static_cast<double>(static_cast<float>(D(i, j))));
  EXPECT_THROW(DistanceMatrix(1, 2, {0.1, -0.1}), Error);
  EXPECT_THROW(parse_distance_matrix("VMDM1\n2 2\nabc"), Error);
}

TEST(Multilateration, ExactOnNoiselessData) {
  Rng rng(33);
  const std::vector<Vec3> anchors = random_points(rng, 40, 0.1);
  const std::vector<Vec3> pts = random_points(rng, 30, 0.2);
  const Multilateration m = multilaterate_points(distance_matrix(pts, anchors), anchors);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_LT((m.positions.points[i] - pts[i]).norm(), 1e-9);
    EXPECT_LT(m.residuals[i], 1e-9);
  }
}

TEST(Multilateration, DegenerateAnchorsRejected) {
  std::vector<Vec3> planar;
  for (int i = 0; i < 10; ++i) planar.emplace_back(i * 0.1, (i * 7 % 5) * 0.1, 0.0);
  const std::vector<Vec3> pts{Vec3(0.1, 0.2, 0.3)};
  try {
    multilaterate_points(distance_matrix(pts, planar), planar);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateAnchors);
  }
}

TEST(Kabsch, RecoversRigidMotionWithoutReflection) {
  Rng rng(34);
  const std::vector<Vec3> src = random_points(rng, 50);
  const RigidTransform T = fixtures::random_transform(rng);
  const std::vector<Vec3> dst = transformed(std::span<const Vec3>(src), T);
  const RigidTransform est = kabsch(src, dst);
  for (const Vec3& p : src) EXPECT_LT((est.apply(p) - T.apply(p)).norm(), 1e-10);

  std::vector<Vec3> mirrored = dst;
  for (Vec3& p : mirrored) p.x() = -p.x();
  EXPECT_GT(kabsch(src, mirrored).rotation_matrix().determinant(), 0.0);

  const std::vector<Vec3> line{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
  EXPECT_THROW(kabsch(line, line), Error);
}

TEST(GraspFit, RecoversNearbyConfiguration) {
  const RobotModel hand = fixtures::hand_model();
  const RobotPointSampler sampler(hand, 256, 4);
  Rng rng(35);
  RobotConfig truth = fixtures::pinch_config(hand);
  for (double& a : truth.joint_angles) a += rng.uniform(-0.05, 0.05);
  truth.wrist = fixtures::random_transform(rng, 0.1);
  const GraspResult r = fit_grasp_config(sampler, sampler.at(truth), fixtures::pinch_config(hand));
  EXPECT_LT(r.fit_rms, 1e-6);
  for (std::size_t k = 0; k < hand.dof(); ++k) EXPECT_NEAR(r.config.joint_angles[k], truth.joint_angles[k], 1e-4);
}

TEST(Contacts, PinchYieldsTwoOpposedContacts) {
  const RobotModel hand = fixtures::hand_model();
  const fixtures::PinchFixture pinch = fixtures::pinch_fixture(hand);
  const std::vector<Contact> c = extract_contacts(robot_mesh_at(hand, pinch.q_star).mesh, pinch.cylinder);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_LT(c[0].normal.dot(c[1].normal), -0.9);
  EXPECT_TRUE(extract_contacts(make_box(Vec3(0.01, 0.01, 0.01)), pinch.cylinder).empty());
  EXPECT_THROW(extract_contacts(make_box(Vec3(1, 1, 1)), pinch.cylinder, 0.0), Error);
}

TEST(Contacts, ClusterCountMatchesFloodFill) {
  const RobotModel hand = fixtures::hand_model();
  const fixtures::PinchFixture pinch = fixtures::pinch_fixture(hand);
  const double eps = 0.002;
  for (const RobotConfig& q : {pinch.q_star, fixtures::tripod_config(hand)}) {
    const TriMesh robot = robot_mesh_at(hand, q).mesh;
    const MeshDistance dist(robot);
    std::vector<Vec3> near;
    for (const Vec3& v : pinch.cylinder.vertices()) {
      if (dist.distance(v) < eps) near.push_back(v);
    }
    std::vector<int> label(near.size(), -1);
    int clusters = 0;
    for (std::size_t seed = 0; seed < near.size(); ++seed) {
      if (label[seed] >= 0) continue;
      std::vector<std::size_t> stack{seed};
      label[seed] = clusters;
      while (!stack.empty()) {
        const std::size_t a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < near.size(); ++b) {
          if (label[b] < 0 && (near[a] - near[b]).norm() <= 2 * eps) {
            label[b] = clusters;
            stack.push_back(b);
          }
        }
      }
      ++clusters;
    }
    EXPECT_EQ(static_cast<int>(extract_contacts(robot, pinch.cylinder, eps).size()), clusters);
  }
}

TEST(Contacts, SphereOnCubeFaceUsesFaceNormal) {
  const TriMesh cube = make_box(Vec3(0.05, 0.05, 0.05), 20);
  const TriMesh tip = transformed(make_uv_sphere(0.01, 16, 16), RigidTransform::from_translation(Vec3(0, 0, 0.0355)));
  const std::vector<Contact> c = extract_contacts(tip, cube);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_LT((c[0].normal - Vec3::UnitZ()).norm(), 1e-6);
  EXPECT_NEAR(c[0].point.z(), 0.025, 1e-12);
}

TEST(Contacts, IoRoundTrip) {
  const std::vector<Contact> c{{Vec3(1, 2, 3), Vec3(0, 0, 1)}, {Vec3(-1, 0.5, 0.25), Vec3(1, 0, 0)}};
  const std::vector<Contact> back = parse_contacts(format_contacts(c));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].point, c[1].point);
  EXPECT_EQ(back[1].normal, c[1].normal);
}

TEST(Stability, TripodHoldsAndNoContactsFail) {
  const RobotModel hand = fixtures::hand_model();
  const fixtures::PinchFixture pinch = fixtures::pinch_fixture(hand);
  const std::vector<Contact> c =
      extract_contacts(robot_mesh_at(hand, fixtures::tripod_config(hand)).mesh, pinch.cylinder);
  ASSERT_EQ(c.size(), 3u);
  StabilityOptions opts;
  opts.mass = 0.05;
  const StabilityReport ok = stability_check(c, pinch.center, opts);
  EXPECT_TRUE(ok.success);
  EXPECT_DOUBLE_EQ(ok.disturbance_newtons, 0.025);
  EXPECT_FALSE(stability_check(std::vector<Contact>{}, pinch.center, opts).success);
  opts.mu = 0.0;
  EXPECT_FALSE(stability_check(c, pinch.center, opts).success);
  opts.cone_edges = 3;
  EXPECT_THROW(stability_check(c, pinch.center, opts), Error);
}

// Point contacts carry no torque about the line through them, so a two-point
// pinch holds only when the centroid lies on that line.
TEST(Stability, TwoPointPinchNeedsCentroidOnContactLine) {
  const RobotModel hand = fixtures::hand_model();
  const fixtures::PinchFixture pinch = fixtures::pinch_fixture(hand);
  const std::vector<Contact> c = extract_contacts(robot_mesh_at(hand, pinch.q_star).mesh, pinch.cylinder);
  ASSERT_EQ(c.size(), 2u);
  StabilityOptions opts;
  opts.mass = 0.05;
  EXPECT_TRUE(stability_check(c, 0.5 * (c[0].point + c[1].point), opts).success);
  const Vec3 line = (c[1].point - c[0].point).normalized();
  const Vec3 off = line.cross(Vec3::UnitZ()).normalized();
  EXPECT_FALSE(stability_check(c, 0.5 * (c[0].point + c[1].point) + 0.002 * off, opts).success);
}

namespace {

std::vector<Contact> sphere_triple(double radius) {
  std::vector<Contact> c;
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0;
    const Vec3 n(std::cos(a), std::sin(a), 0.0);
    c.push_back({radius * n, n});
  }
  return c;
}

}  // namespace

TEST(Stability, ThreeEquatorContactsOnSphere) {
  const std::vector<Contact> c = sphere_triple(0.05);
  StabilityOptions opts;
  opts.mass = 1.0;
  opts.mu = 0.8;
  EXPECT_TRUE(stability_check(c, Vec3::Zero(), opts).success);
  opts.mu = 0.01;
  EXPECT_FALSE(stability_check(c, Vec3::Zero(), opts).success);
}

TEST(Stability, IncreasingFrictionNeverLosesADirection) {
  Rng rng(36);
  const std::vector<double> mus{0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.2};
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Contact> c;
    const int n = 2 + trial % 3;
    for (int k = 0; k < n; ++k) {
      const Vec3 dir = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)).normalized();
      c.push_back({0.03 * dir, dir});
    }
    StabilityOptions opts;
    opts.mass = 0.2;
    std::array<bool, 6> previous{};
    for (double mu : mus) {
      opts.mu = mu;
      const StabilityReport r = stability_check(c, Vec3::Zero(), opts);
      for (std::size_t k = 0; k < 6; ++k) {
        if (previous[k]) {
          EXPECT_TRUE(r.resisted[k]) << "trial " << trial << " mu " << mu << " dir " << k;
        }
      }
      previous = r.resisted;
    }
  }
}

TEST(Stability, GraspMatrixColumnsAreConeEdges) {
  const std::vector<Contact> c{{Vec3(0.1, 0, 0), Vec3(1, 0, 0)}};
  const Eigen::MatrixXd G = grasp_matrix(c, Vec3::Zero(), 0.5, 8);
  ASSERT_EQ(G.cols(), 8);
  for (Eigen::Index j = 0; j < 8; ++j) {
    EXPECT_NEAR(G(0, j), -1.0, 1e-15);
    EXPECT_NEAR((G.block<2, 1>(1, j).norm()), 0.5, 1e-15);
    const Vec3 torque = Vec3(0.1, 0, 0).cross(Vec3(G.block<3, 1>(0, j)));
    EXPECT_LT((Vec3(G.block<3, 1>(3, j)) - torque).norm(), 1e-15);
  }
}
