#pragma once

#include <Eigen/Core>

#include "dexrecon/robot/model.hpp"

namespace dexrecon {

// Tangent coordinates of a configuration: [translation (3), rotation vector
// (3), joint values (dof)]. Rotation increments act on the left, in the world
// frame: R <- exp(w) R.

RobotConfig retract(const RobotConfig& q, const Eigen::VectorXd& delta);

// a "minus" b: the tangent vector d with retract(b, d) == a (to rounding).
Eigen::VectorXd config_difference(const RobotConfig& a, const RobotConfig& b);

Eigen::VectorXd joint_vector(const RobotConfig& q);

}  // namespace dexrecon
