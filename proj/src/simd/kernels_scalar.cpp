#include <cmath>

#include "dexrecon/simd/kernels.hpp"

namespace dexrecon::simd {
namespace {

ArgMin nearest_sq_scalar(const double* xs, const double* ys, const double* zs, std::size_t n,
                         double qx, double qy, double qz) {
  ArgMin best;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double dz = zs[i] - qz;
    const double d = (dx * dx + dy * dy) + dz * dz;
    if (d < best.sq_distance) {
      best.sq_distance = d;
      best.index = i;
    }
  }
  return best;
}

void project_pinhole_scalar(const double* xs, const double* ys, const double* zs, std::size_t n,
                            const PinholeParams& p, std::int32_t* cols, std::int32_t* rows) {
  const double* r = p.rotation;
  const double* t = p.translation;
  const double width = p.width, height = p.height;
  for (std::size_t i = 0; i < n; ++i) {
    const double X = ((r[0] * xs[i] + r[1] * ys[i]) + r[2] * zs[i]) + t[0];
    const double Y = ((r[3] * xs[i] + r[4] * ys[i]) + r[5] * zs[i]) + t[1];
    const double Z = ((r[6] * xs[i] + r[7] * ys[i]) + r[8] * zs[i]) + t[2];
    cols[i] = -1;
    rows[i] = -1;
    if (!(Z > 0.0)) continue;
    const double cu = std::floor(((p.fx * X) / Z + p.cx) + 0.5);
    const double cv = std::floor(((p.fy * Y) / Z + p.cy) + 0.5);
    if (cu >= 0.0 && cu < width && cv >= 0.0 && cv < height) {
      cols[i] = static_cast<std::int32_t>(cu);
      rows[i] = static_cast<std::int32_t>(cv);
    }
  }
}

}  // namespace

namespace detail {
const KernelTable& scalar_table() {
  static const KernelTable table{&nearest_sq_scalar, &project_pinhole_scalar};
  return table;
}
}  // namespace detail

}  // namespace dexrecon::simd
