// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "dexrecon/simd/kernels.hpp"

namespace dexrecon::simd {
namespace {

ArgMin nearest_sq_avx2(const double* xs, const double* ys, const double* zs, std::size_t n,
                       double qx, double qy, double qz) {
  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  const __m256d vqz = _mm256_set1_pd(qz);
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d step = _mm256_set1_pd(4.0);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vqx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vqy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(zs + i), vqz);
    const __m256d d = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                                    _mm256_mul_pd(dz, dz));
    const __m256d less = _mm256_cmp_pd(d, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d, less);
    best_idx = _mm256_blendv_pd(best_idx, idx, less);
    idx = _mm256_add_pd(idx, step);
  }

  alignas(32) double lane_d[4];
  alignas(32) double lane_i[4];
  _mm256_store_pd(lane_d, best);
  _mm256_store_pd(lane_i, best_idx);
  ArgMin result;
  for (int l = 0; l < 4; ++l) {
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

void project_pinhole_avx2(const double* xs, const double* ys, const double* zs, std::size_t n,
                          const PinholeParams& p, std::int32_t* cols, std::int32_t* rows) {
  const double* r = p.rotation;
  const double* t = p.translation;
  __m256d R[9];
  for (int k = 0; k < 9; ++k) R[k] = _mm256_set1_pd(r[k]);
  const __m256d t0 = _mm256_set1_pd(t[0]), t1 = _mm256_set1_pd(t[1]), t2 = _mm256_set1_pd(t[2]);
  const __m256d fx = _mm256_set1_pd(p.fx), fy = _mm256_set1_pd(p.fy);
  const __m256d cx = _mm256_set1_pd(p.cx), cy = _mm256_set1_pd(p.cy);
  const __m256d half = _mm256_set1_pd(0.5), zero = _mm256_setzero_pd();
  const __m256d minus_one = _mm256_set1_pd(-1.0);
  const __m256d width = _mm256_set1_pd(p.width), height = _mm256_set1_pd(p.height);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs + i);
    const __m256d y = _mm256_loadu_pd(ys + i);
    const __m256d z = _mm256_loadu_pd(zs + i);
    auto row = [&](int k, __m256d tk) {
      return _mm256_add_pd(
          _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(R[k], x), _mm256_mul_pd(R[k + 1], y)),
                        _mm256_mul_pd(R[k + 2], z)),
          tk);
    };
    const __m256d X = row(0, t0), Y = row(3, t1), Z = row(6, t2);
    __m256d valid = _mm256_cmp_pd(Z, zero, _CMP_GT_OQ);
    const __m256d cu = _mm256_floor_pd(_mm256_add_pd(_mm256_add_pd(_mm256_div_pd(_mm256_mul_pd(fx, X), Z), cx), half));
    const __m256d cv = _mm256_floor_pd(_mm256_add_pd(_mm256_add_pd(_mm256_div_pd(_mm256_mul_pd(fy, Y), Z), cy), half));
    valid = _mm256_and_pd(valid, _mm256_cmp_pd(cu, zero, _CMP_GE_OQ));
    valid = _mm256_and_pd(valid, _mm256_cmp_pd(cu, width, _CMP_LT_OQ));
    valid = _mm256_and_pd(valid, _mm256_cmp_pd(cv, zero, _CMP_GE_OQ));
    valid = _mm256_and_pd(valid, _mm256_cmp_pd(cv, height, _CMP_LT_OQ));
    const __m128i ci = _mm256_cvttpd_epi32(_mm256_blendv_pd(minus_one, cu, valid));
    const __m128i ri = _mm256_cvttpd_epi32(_mm256_blendv_pd(minus_one, cv, valid));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(cols + i), ci);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(rows + i), ri);
  }
  if (i < n) detail::scalar_table().project_pinhole(xs + i, ys + i, zs + i, n - i, p, cols + i, rows + i);
}

}  // namespace

namespace detail {
const KernelTable& avx2_table() {
  static const KernelTable table{&nearest_sq_avx2, &project_pinhole_avx2};
  return table;
}
}  // namespace detail

}  // namespace dexrecon::simd
