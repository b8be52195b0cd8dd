#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>

// Data-parallel inner loops. Every backend evaluates the same floating-point
// expression tree in the same order, so vector results are bit-identical to
// the scalar reference (the build disables mul/add contraction).

namespace dexrecon::simd {

enum class Backend { Scalar, Avx2, Neon };

struct ArgMin {
  double sq_distance = std::numeric_limits<double>::infinity();
  std::size_t index = 0;  // relative to the scanned block; lowest index on ties
};

struct PinholeParams {
  double rotation[9];  // row-major
  double translation[3];
  double fx, fy, cx, cy;
  std::int32_t width, height;
};

struct KernelTable {
  // Squared distance ((dx*dx + dy*dy) + dz*dz) from q to the nearest of n SoA points.
  ArgMin (*nearest_sq)(const double* xs, const double* ys, const double* zs, std::size_t n,
                       double qx, double qy, double qz);

  // Transform SoA points into the camera frame and round to the nearest pixel:
  // col = floor(fx*X/Z + cx + 0.5). Points behind the camera or outside the
  // image get col = row = -1.
  void (*project_pinhole)(const double* xs, const double* ys, const double* zs, std::size_t n,
                          const PinholeParams& params, std::int32_t* cols, std::int32_t* rows);
};

bool backend_available(Backend backend);
const KernelTable& kernels(Backend backend);

// Best available backend, overridable with DEXRECON_SIMD=scalar|avx2|neon.
Backend active_backend();
const KernelTable& active_kernels();
std::string_view backend_name(Backend backend);

namespace detail {
const KernelTable& scalar_table();
#if defined(DEXRECON_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(DEXRECON_HAVE_NEON)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace dexrecon::simd
