// AArch64 Advanced SIMD variants, two doubles per register.
#include <arm_neon.h>

#include <cmath>

#include "dexrecon/simd/kernels.hpp"

namespace dexrecon::simd {
namespace {

ArgMin nearest_sq_neon(const double* xs, const double* ys, const double* zs, std::size_t n,
                       double qx, double qy, double qz) {
  const float64x2_t vqx = vdupq_n_f64(qx), vqy = vdupq_n_f64(qy), vqz = vdupq_n_f64(qz);
  float64x2_t best = vdupq_n_f64(std::numeric_limits<double>::infinity());
  float64x2_t best_idx = vdupq_n_f64(0.0);
  const double start[2] = {0.0, 1.0};
  float64x2_t idx = vld1q_f64(start);
  const float64x2_t step = vdupq_n_f64(2.0);

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vqx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vqy);
    const float64x2_t dz = vsubq_f64(vld1q_f64(zs + i), vqz);
    const float64x2_t d = vaddq_f64(vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)), vmulq_f64(dz, dz));
    const uint64x2_t less = vcltq_f64(d, best);
    best = vbslq_f64(less, d, best);
    best_idx = vbslq_f64(less, idx, best_idx);
    idx = vaddq_f64(idx, step);
  }

  double lane_d[2], lane_i[2];
  vst1q_f64(lane_d, best);
  vst1q_f64(lane_i, best_idx);
  ArgMin result;
  for (int l = 0; l < 2; ++l) {
    const auto li = static_cast<std::size_t>(lane_i[l]);
    if (lane_d[l] < result.sq_distance ||
        (lane_d[l] == result.sq_distance && li < result.index)) {
      result.sq_distance = lane_d[l];
      result.index = li;
    }
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double dz = zs[i] - qz;
    const double d = (dx * dx + dy * dy) + dz * dz;
    if (d < result.sq_distance) {
      result.sq_distance = d;
      result.index = i;
    }
  }
  return result;
}

void project_pinhole_neon(const double* xs, const double* ys, const double* zs, std::size_t n,
                          const PinholeParams& p, std::int32_t* cols, std::int32_t* rows) {
  const double* r = p.rotation;
  const double* t = p.translation;
  float64x2_t R[9];
  for (int k = 0; k < 9; ++k) R[k] = vdupq_n_f64(r[k]);
  const float64x2_t T[3] = {vdupq_n_f64(t[0]), vdupq_n_f64(t[1]), vdupq_n_f64(t[2])};
  const float64x2_t fx = vdupq_n_f64(p.fx), fy = vdupq_n_f64(p.fy);
  const float64x2_t cx = vdupq_n_f64(p.cx), cy = vdupq_n_f64(p.cy);
  const float64x2_t half = vdupq_n_f64(0.5), zero = vdupq_n_f64(0.0), minus_one = vdupq_n_f64(-1.0);
  const float64x2_t width = vdupq_n_f64(p.width), height = vdupq_n_f64(p.height);

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(xs + i), y = vld1q_f64(ys + i), z = vld1q_f64(zs + i);
    auto row = [&](int k, float64x2_t tk) {
      return vaddq_f64(vaddq_f64(vaddq_f64(vmulq_f64(R[k], x), vmulq_f64(R[k + 1], y)),
                                 vmulq_f64(R[k + 2], z)),
                       tk);
    };
    const float64x2_t X = row(0, T[0]), Y = row(3, T[1]), Z = row(6, T[2]);
    uint64x2_t valid = vcgtq_f64(Z, zero);
    const float64x2_t cu = vrndmq_f64(vaddq_f64(vaddq_f64(vdivq_f64(vmulq_f64(fx, X), Z), cx), half));
    const float64x2_t cv = vrndmq_f64(vaddq_f64(vaddq_f64(vdivq_f64(vmulq_f64(fy, Y), Z), cy), half));
    valid = vandq_u64(valid, vcgeq_f64(cu, zero));
    valid = vandq_u64(valid, vcltq_f64(cu, width));
    valid = vandq_u64(valid, vcgeq_f64(cv, zero));
    valid = vandq_u64(valid, vcltq_f64(cv, height));
    const int64x2_t ci = vcvtq_s64_f64(vbslq_f64(valid, cu, minus_one));
    const int64x2_t ri = vcvtq_s64_f64(vbslq_f64(valid, cv, minus_one));
    cols[i] = static_cast<std::int32_t>(vgetq_lane_s64(ci, 0));
    cols[i + 1] = static_cast<std::int32_t>(vgetq_lane_s64(ci, 1));
    rows[i] = static_cast<std::int32_t>(vgetq_lane_s64(ri, 0));
    rows[i + 1] = static_cast<std::int32_t>(vgetq_lane_s64(ri, 1));
  }
  if (i < n) detail::scalar_table().project_pinhole(xs + i, ys + i, zs + i, n - i, p, cols + i, rows + i);
}

}  // namespace

namespace detail {
const KernelTable& neon_table() {
  static const KernelTable table{&nearest_sq_neon, &project_pinhole_neon};
  return table;
}
}  // namespace detail

}  // namespace dexrecon::simd
