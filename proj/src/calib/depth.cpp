#include <cmath>

#include "dexrecon/calib/calib.hpp"
#include "dexrecon/error.hpp"

namespace dexrecon {

void DepthGrid::validate() const {
  if (rows <= 0 || cols <= 0) fail(ErrorCode::InvalidArgument, "depth grid dimensions must be positive");
  if (values.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    fail(ErrorCode::DimensionMismatch, "depth grid value count differs from rows * cols");
  }
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "depth grid values must be finite");
  }
}

double hand_depth_correction(std::span<const Eigen::Vector2d> keypoints, const DepthGrid& depth) {
  depth.validate();
  double sum = 0.0;
  std::size_t count = 0;
  for (const Eigen::Vector2d& uv : keypoints) {
    const double col = std::floor(uv.x() + 0.5);
    const double row = std::floor(uv.y() + 0.5);
    if (!(col >= 0.0 && col < depth.cols && row >= 0.0 && row < depth.rows)) continue;
    const double d = depth.at(static_cast<int>(row), static_cast<int>(col));
    if (d > 0.0) {
      sum += d;
      ++count;
    }
  }
  if (count == 0) fail(ErrorCode::NoValidSamples, "no keypoint lands on a valid depth sample");
  return sum / static_cast<double>(count);
}

}  // namespace dexrecon
