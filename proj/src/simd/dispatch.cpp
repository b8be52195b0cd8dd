#include <cstdlib>
#include <string>

#include "dexrecon/simd/kernels.hpp"

namespace dexrecon::simd {

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(DEXRECON_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(DEXRECON_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels(Backend backend) {
#if defined(DEXRECON_HAVE_AVX2)
  if (backend == Backend::Avx2 && backend_available(backend)) return detail::avx2_table();
#endif
#if defined(DEXRECON_HAVE_NEON)
  if (backend == Backend::Neon) return detail::neon_table();
#endif
  return detail::scalar_table();
}

namespace {

Backend detect() {
  if (const char* env = std::getenv("DEXRECON_SIMD")) {
    const std::string choice(env);
    if (choice == "scalar") return Backend::Scalar;
    if (choice == "avx2" && backend_available(Backend::Avx2)) return Backend::Avx2;
    if (choice == "neon" && backend_available(Backend::Neon)) return Backend::Neon;
  }
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend backend = detect();
  return backend;
}

const KernelTable& active_kernels() { return kernels(active_backend()); }

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

}  // namespace dexrecon::simd
