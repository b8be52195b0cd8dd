#include <cmath>
#include <numbers>

#include "dexrecon/error.hpp"
#include "dexrecon/grasp/grasp.hpp"
#include "dexrecon/grasp/lp.hpp"

namespace dexrecon {

Vec3 disturbance_direction(std::size_t k) {
  Vec3 d = Vec3::Zero();
  d[static_cast<Eigen::Index>(k / 2)] = (k % 2 == 0) ? 1.0 : -1.0;
  return d;
}

namespace {

// Orthonormal tangents for a unit normal, chosen deterministically.
void tangent_basis(const Vec3& n, Vec3& t1, Vec3& t2) {
  const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  t1 = n.cross(helper).normalized();
  t2 = n.cross(t1);
}

}  // namespace

Eigen::MatrixXd grasp_matrix(std::span<const Contact> contacts, const Vec3& centroid, double mu, int edges) {
  Eigen::MatrixXd G(6, static_cast<Eigen::Index>(contacts.size()) * edges);
  for (std::size_t i = 0; i < contacts.size(); ++i) {
    const Vec3 inward = -contacts[i].normal.normalized();
    Vec3 t1, t2;
    tangent_basis(inward, t1, t2);
    const Vec3 arm = contacts[i].point - centroid;
    for (int j = 0; j < edges; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / edges;
      const Vec3 f = inward + mu * (std::cos(theta) * t1 + std::sin(theta) * t2);
      const Eigen::Index col = static_cast<Eigen::Index>(i) * edges + j;
      G.block<3, 1>(0, col) = f;
      G.block<3, 1>(3, col) = arm.cross(f);
    }
  }
  return G;
}

Eigen::Matrix<double, 6, 1> external_wrench(std::size_t k, const StabilityOptions& options) {
  Eigen::Matrix<double, 6, 1> w = Eigen::Matrix<double, 6, 1>::Zero();
  w.head<3>() = Vec3(0.0, 0.0, -options.mass * options.gravity) +
                0.5 * options.mass * options.disturbance_scale * disturbance_direction(k);
  return w;
}

StabilityReport stability_check(std::span<const Contact> contacts, const Vec3& centroid,
                                const StabilityOptions& options) {
  if (!(options.mu >= 0.0)) fail(ErrorCode::InvalidArgument, "friction coefficient must be >= 0");
  if (options.cone_edges < 4) fail(ErrorCode::InvalidArgument, "friction cones need at least 4 edges");
  if (!(options.mass > 0.0)) fail(ErrorCode::InvalidArgument, "object mass must be positive");

  StabilityReport report;
  report.contacts.assign(contacts.begin(), contacts.end());
  report.centroid = centroid;
  report.mu = options.mu;
  report.cone_edges = options.cone_edges;
  report.disturbance_newtons = 0.5 * options.mass * options.disturbance_scale;
  report.max_normal_force =
      options.max_normal_force > 0.0 ? options.max_normal_force : 2.0 * options.mass * options.gravity;
  if (contacts.empty()) return report;

  // Variables: edge coefficients (contacts * edges), then one slack per
  // contact for sum_j lambda_ij + s_i = f_max.
  const Eigen::Index n_contacts = static_cast<Eigen::Index>(contacts.size());
  const Eigen::Index n_edges = n_contacts * options.cone_edges;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(6 + n_contacts, n_edges + n_contacts);
  A.topLeftCorner(6, n_edges) = grasp_matrix(contacts, centroid, options.mu, options.cone_edges);
  for (Eigen::Index i = 0; i < n_contacts; ++i) {
    A.block(6 + i, i * options.cone_edges, 1, options.cone_edges).setOnes();
    A(6 + i, n_edges + i) = 1.0;
  }
  Eigen::VectorXd b(6 + n_contacts);
  b.tail(n_contacts).setConstant(report.max_normal_force);

  report.success = true;
  for (std::size_t k = 0; k < 6; ++k) {
    b.head<6>() = -external_wrench(k, options);
    report.resisted[k] = find_feasible_point(A, b).feasible;
    report.success = report.success && report.resisted[k];
  }
  return report;
}

}  // namespace dexrecon
