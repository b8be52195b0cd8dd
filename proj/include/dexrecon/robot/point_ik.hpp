#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "dexrecon/robot/kinematics.hpp"

namespace dexrecon {

// A point fixed in a link frame that should land on `target` (world frame).
struct PointTarget {
  std::size_t link;
  Vec3 local;
  Vec3 target;
  double weight = 1.0;
};

// Adds weight * |q - config|^2 (tangent coordinates) to the objective.
struct ConfigPrior {
  RobotConfig config;
  double weight = 0.0;
};

struct IkOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-8;
  double relative_decrease_tolerance = 1e-10;
  int stall_iterations = 5;
};

struct IkResult {
  RobotConfig config;
  double objective = 0.0;          // sum of weighted squared errors (+ prior term)
  double initial_objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Weighted point-matching objective over a robot configuration,
/// sum_i w_i |FK(q)_link_i(local_i) - target_i|^2, minimized by damped least
/// squares (Levenberg-Marquardt) in the tangent coordinates of
/// config_space.hpp with joint values clamped to their limits after every
/// step. Only steps that lower the objective are accepted.
class PointIkProblem {
 public:
  PointIkProblem(const RobotModel& model, std::vector<PointTarget> targets,
                 std::optional<ConfigPrior> prior = std::nullopt);

  std::size_t parameter_count() const { return 6 + model_->dof(); }

  double objective(const RobotConfig& q) const;
  // Stacked residuals sqrt(w_i) * (p_i(q) - target_i), then the prior block.
  void linearize(const RobotConfig& q, Eigen::VectorXd& residuals, Eigen::MatrixXd* jacobian) const;
  // Analytic gradient of objective() in tangent coordinates (prior excluded
  // from exactness: its rotation block uses the small-angle Jacobian).
  Eigen::VectorXd gradient(const RobotConfig& q) const;

  IkResult solve(const RobotConfig& q_init, const IkOptions& options = {}) const;

 private:
  const RobotModel* model_;
  std::vector<PointTarget> targets_;
  std::optional<ConfigPrior> prior_;
};

}  // namespace dexrecon
