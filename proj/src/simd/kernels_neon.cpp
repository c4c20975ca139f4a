#if defined(__aarch64__)
#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "halfstep/simd.hpp"

namespace halfstep::simd {
namespace {

double sum_abs2_neon(const Complex* z, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(z);
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t a = vld1q_f64(p + 2 * i);
    float64x2_t b = vld1q_f64(p + 2 * i + 2);
    acc0 = vfmaq_f64(acc0, a, a);
    acc1 = vfmaq_f64(acc1, b, b);
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += std::norm(z[i]);
  return acc;
}

double max_abs_neon(const Complex* z, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(z);
  float64x2_t m = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t a = vld1q_f64(p + 2 * i);
    float64x2_t sq = vmulq_f64(a, a);
    m = vmaxq_f64(m, vdupq_n_f64(vaddvq_f64(sq)));
  }
  return std::sqrt(vgetq_lane_f64(m, 0));
}

double max_abs_diff_neon(const Complex* a, const Complex* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  float64x2_t m = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t d = vsubq_f64(vld1q_f64(pa + 2 * i), vld1q_f64(pb + 2 * i));
    m = vmaxq_f64(m, vdupq_n_f64(vaddvq_f64(vmulq_f64(d, d))));
  }
  return std::sqrt(vgetq_lane_f64(m, 0));
}

}  // namespace

const KernelTable& neon_table_impl() {
  static const KernelTable table{Isa::Neon, sum_abs2_neon, max_abs_neon, max_abs_diff_neon};
  return table;
}

}  // namespace halfstep::simd
#endif
