#pragma once

#include <Eigen/Core>

namespace dexrecon {

struct LpFeasibility {
  bool feasible = false;
  Eigen::VectorXd x;               // a feasible point when feasible
  double infeasibility = 0.0;      // phase-1 optimum: sum of artificial variables
  int pivots = 0;
};

// Is there x >= 0 with A x = b? Dense phase-1 simplex with Bland's rule
// (deterministic, cycle-free). Feasible when the phase-1 optimum is below
// `tolerance` times (1 + |b|_inf).
LpFeasibility find_feasible_point(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tolerance = 1e-9);

}  // namespace dexrecon
