#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "dexrecon/error.hpp"
#include "dexrecon/grasp/grasp.hpp"

namespace dexrecon {

Multilateration multilaterate_points(const DistanceMatrix& D, std::span<const Vec3> anchors) {
  const std::size_t n = anchors.size();
  if (D.cols() != n) fail(ErrorCode::DimensionMismatch, "distance matrix columns differ from anchor count");
  if (n < 4) fail(ErrorCode::DegenerateAnchors, "multilateration needs at least 4 anchors");

  const Vec3 mean = vertex_centroid(anchors);
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    A.row(static_cast<Eigen::Index>(j)) = 2.0 * (anchors[j] - mean).transpose();
    norms[static_cast<Eigen::Index>(j)] = anchors[j].squaredNorm();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  if (!(s[2] > 1e-9 * s[0])) fail(ErrorCode::DegenerateAnchors, "anchors are coplanar or collinear");
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  const double mean_norm = norms.mean();

  Multilateration out;
  out.positions.points.reserve(D.rows());
  out.residuals.reserve(D.rows());
  Eigen::VectorXd b(n);
  for (std::size_t r = 0; r < D.rows(); ++r) {
    const double* d = D.row(r);
    double mean_d2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean_d2 += d[j] * d[j];
    mean_d2 /= static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      b[static_cast<Eigen::Index>(j)] = (norms[static_cast<Eigen::Index>(j)] - mean_norm) - (d[j] * d[j] - mean_d2);
    }
    const Vec3 x = qr.solve(b);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double e = (x - anchors[j]).norm() - d[j];
      sum += e * e;
    }
    out.positions.points.push_back(x);
    out.residuals.push_back(std::sqrt(sum / static_cast<double>(n)));
  }
  return out;
}

}  // namespace dexrecon
