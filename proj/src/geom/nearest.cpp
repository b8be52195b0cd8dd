#include "dexrecon/geom/nearest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dexrecon/error.hpp"
#include "dexrecon/simd/kernels.hpp"

namespace dexrecon {

NearestIndex::NearestIndex(std::span<const Vec3> points) : size_(points.size()) {
  if (points.empty()) fail(ErrorCode::EmptyTarget, "nearest-neighbor target set is empty");
  brute_force_ = size_ < kBruteForceThreshold;

  if (brute_force_) {
    xs_.reserve(size_);
    ys_.reserve(size_);
    zs_.reserve(size_);
    for (const Vec3& p : points) {
      xs_.push_back(p.x());
      ys_.push_back(p.y());
      zs_.push_back(p.z());
    }
    return;
  }

  Vec3 lo = points[0], hi = points[0];
  for (const Vec3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  lo_ = lo;
  hi_ = hi;
  const Vec3 extent = hi - lo;
  const double max_extent = std::max(extent.maxCoeff(), 1e-12);
  cell_size_ = max_extent / std::max(1.0, std::cbrt(static_cast<double>(size_)));
  for (int a = 0; a < 3; ++a) {
    dims_[a] = std::clamp(static_cast<int>(std::floor(extent[a] / cell_size_)) + 1, 1, 256);
  }
  origin_ = lo;

  const std::size_t cells = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  std::vector<std::uint32_t> cell_of(size_);
  std::vector<std::uint32_t> counts(cells + 1, 0);
  for (std::size_t i = 0; i < size_; ++i) {
    std::array<int, 3> c{};
    for (int a = 0; a < 3; ++a) {
      c[a] = std::clamp(static_cast<int>(std::floor((points[i][a] - origin_[a]) / cell_size_)), 0,
                        dims_[a] - 1);
    }
    cell_of[i] = static_cast<std::uint32_t>(c[0] + dims_[0] * (c[1] + dims_[1] * c[2]));
    ++counts[cell_of[i] + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) counts[c + 1] += counts[c];
  cell_start_ = counts;

  xs_.resize(size_);
  ys_.resize(size_);
  zs_.resize(size_);
  original_index_.resize(size_);
  std::vector<std::uint32_t> cursor(counts.begin(), counts.end() - 1);
  for (std::size_t i = 0; i < size_; ++i) {
    const std::uint32_t slot = cursor[cell_of[i]]++;
    xs_[slot] = points[i].x();
    ys_[slot] = points[i].y();
    zs_[slot] = points[i].z();
    original_index_[slot] = i;
  }
}

void NearestIndex::scan_cell(std::size_t cell, const Vec3& q, double& best_sq,
                             std::size_t& best_index) const {
  const std::uint32_t begin = cell_start_[cell];
  const std::uint32_t end = cell_start_[cell + 1];
  if (begin == end) return;
  const simd::ArgMin hit = simd::active_kernels().nearest_sq(
      xs_.data() + begin, ys_.data() + begin, zs_.data() + begin, end - begin, q.x(), q.y(), q.z());
  // Within a cell slots are in ascending original index, so the kernel's
  // lowest-slot tie rule is the lowest-index rule.
  const std::size_t index = original_index_[begin + hit.index];
  if (hit.sq_distance < best_sq || (hit.sq_distance == best_sq && index < best_index)) {
    best_sq = hit.sq_distance;
    best_index = index;
  }
}

NearestHit NearestIndex::nearest(const Vec3& q) const {
  if (brute_force_) {
    const simd::ArgMin hit =
        simd::active_kernels().nearest_sq(xs_.data(), ys_.data(), zs_.data(), size_, q.x(), q.y(), q.z());
    return {std::sqrt(hit.sq_distance), hit.index};
  }

  std::array<int, 3> c{};
  for (int a = 0; a < 3; ++a) {
    const double f = std::floor((q[a] - origin_[a]) / cell_size_);
    c[a] = static_cast<int>(std::clamp(f, 0.0, static_cast<double>(dims_[a] - 1)));
  }

  double best_sq = std::numeric_limits<double>::infinity();
  std::size_t best_index = std::numeric_limits<std::size_t>::max();
  const int max_ring = std::max({dims_[0], dims_[1], dims_[2]});
  const double slack = 1e-12 * (q.cwiseAbs().maxCoeff() + origin_.cwiseAbs().maxCoeff() +
                                cell_size_ * max_ring);

  for (int r = 0; r <= max_ring; ++r) {
    const int z0 = std::max(c[2] - r, 0), z1 = std::min(c[2] + r, dims_[2] - 1);
    const int y0 = std::max(c[1] - r, 0), y1 = std::min(c[1] + r, dims_[1] - 1);
    const int x0 = std::max(c[0] - r, 0), x1 = std::min(c[0] + r, dims_[0] - 1);
    for (int z = z0; z <= z1; ++z) {
      const bool z_shell = std::abs(z - c[2]) == r;
      for (int y = y0; y <= y1; ++y) {
        const bool shell = z_shell || std::abs(y - c[1]) == r;
        const std::size_t row = static_cast<std::size_t>(dims_[0]) * (y + static_cast<std::size_t>(dims_[1]) * z);
        if (shell) {
          for (int x = x0; x <= x1; ++x) scan_cell(row + x, q, best_sq, best_index);
        } else {
          if (c[0] - r >= 0) scan_cell(row + (c[0] - r), q, best_sq, best_index);
          if (r > 0 && c[0] + r < dims_[0]) scan_cell(row + (c[0] + r), q, best_sq, best_index);
        }
      }
    }

    // Lower bound on the distance to any point in a cell outside the visited
    // box: each unvisited slab, clipped to the point bounds, is a box.
    double bound_sq = std::numeric_limits<double>::infinity();
    bool unvisited = false;
    for (int a = 0; a < 3; ++a) {
      for (int side = 0; side < 2; ++side) {
        Vec3 slab_lo = lo_, slab_hi = hi_;
        if (side == 0) {
          if (c[a] - r <= 0) continue;
          slab_hi[a] = origin_[a] + (c[a] - r) * cell_size_;
        } else {
          if (c[a] + r >= dims_[a] - 1) continue;
          slab_lo[a] = origin_[a] + (c[a] + r + 1) * cell_size_;
        }
        unvisited = true;
        const Vec3 gap = (slab_lo - q).cwiseMax(q - slab_hi).cwiseMax(0.0);
        bound_sq = std::min(bound_sq, gap.squaredNorm());
      }
    }
    if (!unvisited) break;
    if (best_index != std::numeric_limits<std::size_t>::max() && std::sqrt(bound_sq) > std::sqrt(best_sq) + slack) {
      break;
    }
  }
  return {std::sqrt(best_sq), best_index};
}

void NearestIndex::within(const Vec3& q, double radius, std::vector<std::size_t>& out) const {
  const double r_sq = radius * radius;
  auto scan = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double dx = xs_[i] - q.x(), dy = ys_[i] - q.y(), dz = zs_[i] - q.z();
      if ((dx * dx + dy * dy) + dz * dz <= r_sq) out.push_back(brute_force_ ? i : original_index_[i]);
    }
  };
  if (brute_force_) {
    scan(0, size_);
    return;
  }
  // Cells are clamped like insertions, so boundary cells also cover points
  // beyond the grid's nominal extent.
  std::array<int, 3> lo{}, hi{};
  for (int a = 0; a < 3; ++a) {
    const double top = static_cast<double>(dims_[a] - 1);
    lo[a] = static_cast<int>(std::clamp(std::floor((q[a] - radius - origin_[a]) / cell_size_), 0.0, top));
    hi[a] = static_cast<int>(std::clamp(std::floor((q[a] + radius - origin_[a]) / cell_size_), 0.0, top));
  }
  for (int z = lo[2]; z <= hi[2]; ++z) {
    for (int y = lo[1]; y <= hi[1]; ++y) {
      const std::size_t row = static_cast<std::size_t>(dims_[0]) * (y + static_cast<std::size_t>(dims_[1]) * z);
      scan(cell_start_[row + lo[0]], cell_start_[row + hi[0] + 1]);
    }
  }
}

std::vector<NearestHit> nearest_distances(std::span<const Vec3> query, std::span<const Vec3> target) {
  const NearestIndex index(target);
  std::vector<NearestHit> hits;
  hits.reserve(query.size());
  for (const Vec3& q : query) hits.push_back(index.nearest(q));
  return hits;
}

std::vector<NearestHit> nearest_distances(const PointCloud& query, const PointCloud& target) {
  return nearest_distances(std::span<const Vec3>(query.points), std::span<const Vec3>(target.points));
}

}  // namespace dexrecon
