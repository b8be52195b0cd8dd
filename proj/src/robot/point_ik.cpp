#include "dexrecon/robot/point_ik.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "dexrecon/error.hpp"
#include "dexrecon/robot/config_space.hpp"

namespace dexrecon {

namespace {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

}  // namespace

PointIkProblem::PointIkProblem(const RobotModel& model, std::vector<PointTarget> targets,
                               std::optional<ConfigPrior> prior)
    : model_(&model), targets_(std::move(targets)), prior_(std::move(prior)) {
  for (const PointTarget& t : targets_) {
    if (t.link >= model.links().size()) fail(ErrorCode::MissingLink, "point target references an unknown link");
    if (!(t.weight >= 0.0)) fail(ErrorCode::InvalidArgument, "point target weights must be nonnegative");
  }
  if (prior_) {
    model.check_dimension(prior_->config);
    if (!(prior_->weight >= 0.0)) fail(ErrorCode::InvalidArgument, "prior weight must be nonnegative");
  }
}

void PointIkProblem::linearize(const RobotConfig& q, Eigen::VectorXd& r, Eigen::MatrixXd* J) const {
  const std::size_t dof = model_->dof();
  const auto n = static_cast<Eigen::Index>(parameter_count());
  const bool with_prior = prior_ && prior_->weight > 0.0;
  const auto rows = static_cast<Eigen::Index>(3 * targets_.size() + (with_prior ? n : 0));
  r.resize(rows);
  if (J) J->setZero(rows, n);

  const KinematicState state = compute_kinematics(*model_, q);
  const Vec3& wrist_t = q.wrist.translation();
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    const PointTarget& t = targets_[i];
    const double s = std::sqrt(t.weight);
    const Vec3 p = state.link_poses[t.link].apply(t.local);
    const auto row = static_cast<Eigen::Index>(3 * i);
    r.segment<3>(row) = s * (p - t.target);
    if (!J) continue;
    J->block<3, 3>(row, 0) = s * Mat3::Identity();
    J->block<3, 3>(row, 3) = -s * skew(p - wrist_t);
    for (std::size_t k = 0; k < dof; ++k) {
      const std::size_t j = model_->movable_joint(k);
      if (!model_->joint_moves_link(j, t.link)) continue;
      const Joint& joint = model_->joints()[j];
      const RigidTransform& frame = state.joint_frames[j];
      const Vec3 axis = frame.rotate(joint.axis);
      Vec3 column;
      if (joint.type == JointType::Prismatic) column = axis;
      else column = axis.cross(p - frame.translation());
      J->block<3, 1>(row, static_cast<Eigen::Index>(6 + k)) = s * column;
    }
  }
  if (with_prior) {
    const double s = std::sqrt(prior_->weight);
    const auto row = static_cast<Eigen::Index>(3 * targets_.size());
    r.segment(row, n) = s * config_difference(q, prior_->config);
    if (J) J->block(row, 0, n, n) = s * Eigen::MatrixXd::Identity(n, n);
  }
}

double PointIkProblem::objective(const RobotConfig& q) const {
  Eigen::VectorXd r;
  linearize(q, r, nullptr);
  return r.squaredNorm();
}

Eigen::VectorXd PointIkProblem::gradient(const RobotConfig& q) const {
  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  linearize(q, r, &J);
  return 2.0 * J.transpose() * r;
}

IkResult PointIkProblem::solve(const RobotConfig& q_init, const IkOptions& options) const {
  model_->check_dimension(q_init);
  IkResult result;
  result.config = q_init;
  model_->clamp_to_limits(result.config.joint_angles);

  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  linearize(result.config, r, &J);
  double f = r.squaredNorm();
  result.initial_objective = f;
  const auto n = static_cast<Eigen::Index>(parameter_count());

  Eigen::MatrixXd H = J.transpose() * J;
  double damping = 1e-3 * std::max(H.diagonal().maxCoeff(), 1e-12);
  int stalls = 0;
  bool done = f == 0.0;
  int it = 0;
  for (; it < options.max_iterations && !done; ++it) {
    const Eigen::VectorXd g = J.transpose() * r;
    const Eigen::VectorXd delta =
        (H + damping * Eigen::MatrixXd::Identity(n, n)).ldlt().solve(-g);
    RobotConfig candidate = retract(result.config, delta);
    model_->clamp_to_limits(candidate.joint_angles);
    const double step = config_difference(candidate, result.config).norm();

    Eigen::VectorXd r_new;
    linearize(candidate, r_new, nullptr);
    const double f_new = r_new.squaredNorm();
    if (f_new < f) {
      const double relative = (f - f_new) / f;
      result.config = std::move(candidate);
      f = f_new;
      linearize(result.config, r, &J);
      H = J.transpose() * J;
      damping = std::max(damping / 3.0, 1e-15);
      stalls = relative < options.relative_decrease_tolerance ? stalls + 1 : 0;
      if (step < options.step_tolerance || stalls >= options.stall_iterations || f == 0.0) done = true;
    } else {
      damping *= 4.0;
      // No representable descent left: we are at a (projected) stationary point.
      if (step < options.step_tolerance || damping > 1e20) done = true;
    }
  }
  result.iterations = it;
  result.converged = done;
  result.objective = f;
  return result;
}

}  // namespace dexrecon
