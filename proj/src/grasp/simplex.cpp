#include <cmath>
#include <limits>
#include <vector>

#include "dexrecon/error.hpp"
#include "dexrecon/grasp/lp.hpp"

namespace dexrecon {

LpFeasibility find_feasible_point(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tolerance) {
  if (A.rows() != b.size()) fail(ErrorCode::DimensionMismatch, "LP: row count of A differs from b");
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  const double scale = 1.0 + (b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
  const double eps = 1e-12 * scale;

  // Tableau [A | I | b] with rows sign-flipped so b >= 0; artificials are
  // columns n..n+m-1 and start basic. Last row holds reduced costs of the
  // phase-1 objective (minimize the sum of artificials).
  const Eigen::Index cols = n + m + 1;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, cols);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    T.row(i).head(n) = sign * A.row(i);
    T(i, n + i) = 1.0;
    T(i, cols - 1) = sign * b[i];
  }
  for (Eigen::Index i = 0; i < m; ++i) T.row(m) -= T.row(i);
  for (Eigen::Index i = 0; i < m; ++i) T(m, n + i) = 0.0;
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  LpFeasibility out;
  const int max_pivots = 50 * static_cast<int>(n + m) + 1000;
  while (out.pivots < max_pivots) {
    // Bland: lowest-index column with negative reduced cost.
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (T(m, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    // Ratio test; ties to the lowest basic variable index.
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = T(i, enter);
      if (a <= eps) continue;
      const double ratio = T(i, cols - 1) / a;
      if (ratio < best - 1e-15 * scale ||
          (std::abs(ratio - best) <= 1e-15 * scale && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) break;  // unbounded direction cannot occur in phase 1
    T.row(leave) /= T(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != leave && T(i, enter) != 0.0) T.row(i) -= T(i, enter) * T.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
    ++out.pivots;
  }

  out.infeasibility = -T(m, cols - 1);
  out.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = basis[static_cast<std::size_t>(i)];
    if (j < n) out.x[j] = std::max(0.0, T(i, cols - 1));
  }
  out.feasible = out.infeasibility <= tolerance * scale;
  return out;
}

}  // namespace dexrecon
