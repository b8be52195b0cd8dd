#include <cmath>

#include <Eigen/SVD>

#include "dexrecon/error.hpp"
#include "dexrecon/grasp/grasp.hpp"

namespace dexrecon {

namespace {

Eigen::JacobiSVD<Mat3> cross_covariance_svd(std::span<const Vec3> source, std::span<const Vec3> target,
                                            Vec3& source_mean, Vec3& target_mean) {
  source_mean = vertex_centroid(source);
  target_mean = vertex_centroid(target);
  Mat3 H = Mat3::Zero();
  for (std::size_t i = 0; i < source.size(); ++i) {
    H += (source[i] - source_mean) * (target[i] - target_mean).transpose();
  }
  return Eigen::JacobiSVD<Mat3>(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

}  // namespace

RigidTransform kabsch(std::span<const Vec3> source, std::span<const Vec3> target) {
  if (source.size() != target.size() || source.empty()) {
    fail(ErrorCode::DimensionMismatch, "rigid fit needs equally sized, nonempty point sets");
  }
  Vec3 cs, ct;
  const auto svd = cross_covariance_svd(source, target, cs, ct);
  const double s = svd.singularValues()[0];
  if (!(svd.singularValues()[1] > 1e-9 * s)) {
    fail(ErrorCode::RankDeficientFit, "point set is degenerate (collinear or a single point)");
  }
  Mat3 D = Mat3::Identity();
  D(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const Mat3 R = svd.matrixV() * D * svd.matrixU().transpose();
  return RigidTransform::from_matrix(R, ct - R * cs);
}

GraspResult fit_grasp_config(const RobotPointSampler& sampler, const PointCloud& placed,
                             const RobotConfig& q_canonical, const IkOptions& options) {
  const RobotModel& model = sampler.model();
  model.check_dimension(q_canonical);
  if (placed.size() != sampler.size()) {
    fail(ErrorCode::DimensionMismatch, "placed cloud size differs from the robot sample count");
  }
  const PointCloud canonical = sampler.at(q_canonical);
  const RigidTransform T = kabsch(canonical.points, placed.points);

  RobotConfig init = q_canonical;
  init.wrist = T * q_canonical.wrist;

  std::vector<PointTarget> targets;
  targets.reserve(placed.size());
  for (std::size_t i = 0; i < placed.size(); ++i) {
    targets.push_back({sampler.point_links()[i], sampler.local_points()[i], placed.points[i], 1.0});
  }
  const IkResult ik = PointIkProblem(model, std::move(targets)).solve(init, options);

  GraspResult out;
  out.placed_cloud = placed;
  out.config = ik.config;
  out.wrist_pose = ik.config.wrist;
  out.fit_rms = std::sqrt(ik.objective / static_cast<double>(placed.size()));
  out.iterations = ik.iterations;
  out.converged = ik.converged;
  return out;
}

}  // namespace dexrecon
