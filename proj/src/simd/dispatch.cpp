#include <cstdlib>
#include <string>

#include "halfstep/simd.hpp"

namespace halfstep::simd {

#if defined(HALFSTEP_HAVE_AVX2)
const KernelTable& avx2_table_impl();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table_impl();
#endif

const KernelTable* avx2_kernels() {
#if defined(HALFSTEP_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(__aarch64__)
  return &neon_table_impl();
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* env = std::getenv("HALFSTEP_SIMD");
    if (env != nullptr && std::string(env) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    if (const KernelTable* t = neon_kernels()) return *t;
    return scalar_kernels();
  }();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

}  // namespace halfstep::simd
