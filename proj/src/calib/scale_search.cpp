#include <algorithm>
#include <cmath>

#include "dexrecon/calib/calib.hpp"
#include "dexrecon/error.hpp"
#include "dexrecon/geom/sampling.hpp"
#include "dexrecon/simd/kernels.hpp"

namespace dexrecon {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) fail(ErrorCode::InvalidArgument, "focal lengths must be positive");
  if (width <= 0 || height <= 0) fail(ErrorCode::InvalidArgument, "image size must be positive");
  if (!(cx >= -0.5 * width && cx <= 1.5 * width && cy >= -0.5 * height && cy <= 1.5 * height)) {
    fail(ErrorCode::InvalidArgument, "principal point too far outside the image");
  }
}

std::size_t MaskImage::occupied() const {
  return static_cast<std::size_t>(std::count_if(pixels.begin(), pixels.end(), [](std::uint8_t p) { return p != 0; }));
}

namespace {

simd::PinholeParams pinhole(const RigidTransform& T, const CameraIntrinsics& K) {
  simd::PinholeParams p{};
  const Mat3 R = T.rotation_matrix();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) p.rotation[3 * r + c] = R(r, c);
    p.translation[r] = T.translation()[r];
  }
  p.fx = K.fx;
  p.fy = K.fy;
  p.cx = K.cx;
  p.cy = K.cy;
  p.width = K.width;
  p.height = K.height;
  return p;
}

struct SoA {
  std::vector<double> x, y, z;
};

SoA to_soa(std::span<const Vec3> points) {
  SoA s;
  s.x.reserve(points.size());
  s.y.reserve(points.size());
  s.z.reserve(points.size());
  for (const Vec3& p : points) {
    s.x.push_back(p.x());
    s.y.push_back(p.y());
    s.z.push_back(p.z());
  }
  return s;
}

MaskImage splat(const SoA& pts, const RigidTransform& camera_from_points, const CameraIntrinsics& K, int dilation) {
  const std::size_t n = pts.x.size();
  std::vector<std::int32_t> cols(n), rows(n);
  simd::active_kernels().project_pinhole(pts.x.data(), pts.y.data(), pts.z.data(), n, pinhole(camera_from_points, K),
                                         cols.data(), rows.data());
  MaskImage hit{K.height, K.width, std::vector<std::uint8_t>(static_cast<std::size_t>(K.width) * K.height, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    if (cols[i] >= 0) hit.pixels[static_cast<std::size_t>(rows[i]) * K.width + cols[i]] = 1;
  }
  if (dilation <= 0) return hit;
  MaskImage out = hit;
  for (int r = 0; r < K.height; ++r) {
    for (int c = 0; c < K.width; ++c) {
      if (!hit.at(r, c)) continue;
      for (int dr = -dilation; dr <= dilation; ++dr) {
        for (int dc = -dilation; dc <= dilation; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr >= 0 && rr < K.height && cc >= 0 && cc < K.width) out.pixels[static_cast<std::size_t>(rr) * K.width + cc] = 1;
        }
      }
    }
  }
  return out;
}

}  // namespace

MaskImage render_silhouette(std::span<const Vec3> points, const RigidTransform& camera_from_points,
                            const CameraIntrinsics& intrinsics, int dilation) {
  intrinsics.validate();
  return splat(to_soa(points), camera_from_points, intrinsics, dilation);
}

double mask_iou(const MaskImage& a, const MaskImage& b) {
  if (a.rows != b.rows || a.cols != b.cols) fail(ErrorCode::DimensionMismatch, "mask sizes differ");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const bool pa = a.pixels[i] != 0, pb = b.pixels[i] != 0;
    inter += (pa && pb) ? 1 : 0;
    uni += (pa || pb) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<Vec3> scale_about(std::span<const Vec3> points, const Vec3& center, double s) {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const Vec3& p : points) out.push_back(center + s * (p - center));
  return out;
}

std::vector<double> default_scale_candidates() {
  std::vector<double> out;
  for (int i = 0; i <= 15; ++i) out.push_back((5 + i) / 10.0);
  return out;
}

ScaleSearchResult scale_search(const TriMesh& mesh, const RigidTransform& camera_pose,
                               const CameraIntrinsics& intrinsics, std::span<const MaskImage> masks,
                               std::span<const RigidTransform> object_poses, std::span<const double> candidates,
                               const ScaleSearchOptions& options) {
  if (candidates.empty()) fail(ErrorCode::EmptyCandidates, "scale search needs at least one candidate");
  if (masks.size() != object_poses.size() || masks.empty()) {
    fail(ErrorCode::DimensionMismatch, "scale search needs one object pose per mask");
  }
  intrinsics.validate();
  for (const MaskImage& m : masks) {
    if (m.rows != intrinsics.height || m.cols != intrinsics.width) {
      fail(ErrorCode::DimensionMismatch, "mask size differs from the intrinsics image size");
    }
  }
  const std::vector<Vec3> samples = sample_surface(mesh, options.samples, options.seed).points;
  const Vec3 center = surface_centroid(mesh);

  ScaleSearchResult result;
  bool any_visible = false;
  for (double s : candidates) {
    const SoA pts = to_soa(scale_about(samples, center, s));
    double error = 0.0;
    for (std::size_t f = 0; f < masks.size(); ++f) {
      const MaskImage silhouette = splat(pts, camera_pose * object_poses[f], intrinsics, options.dilation);
      any_visible = any_visible || silhouette.occupied() > 0;
      error += 1.0 - mask_iou(silhouette, masks[f]);
    }
    result.errors.push_back(error / static_cast<double>(masks.size()));
  }
  if (!any_visible) fail(ErrorCode::NoVisiblePoints, "the object projects outside the image for every candidate");

  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const std::size_t b = result.best_index;
    const double ei = result.errors[i], eb = result.errors[b];
    const double di = std::abs(candidates[i] - 1.0), db = std::abs(candidates[b] - 1.0);
    if (ei < eb || (ei == eb && (di < db || (di == db && candidates[i] < candidates[b])))) result.best_index = i;
  }
  result.best_scale = candidates[result.best_index];
  return result;
}

}  // namespace dexrecon
