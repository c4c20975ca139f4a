// Compiled with -mavx2 -mfma; only called after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "halfstep/simd.hpp"

namespace halfstep::simd {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// A complex array is an interleaved double array of length 2n; |z|^2 = re^2 + im^2
// so sums can run over the flat doubles directly.
double sum_abs2_avx2(const Complex* z, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(z);
  const std::size_t len = 2 * n;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    __m256d a = _mm256_loadu_pd(p + i);
    __m256d b = _mm256_loadu_pd(p + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) acc += p[i] * p[i];
  return acc;
}

// Each 256-bit lane pair holds (re, im) of two numbers; the hadd-free trick is to
// square, then add the swapped-within-128 permutation so both slots hold |z|^2.
__m256d abs2_pairs(__m256d v) {
  __m256d sq = _mm256_mul_pd(v, v);
  return _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5));
}

double max_abs_avx2(const Complex* z, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(z);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = _mm256_max_pd(m, abs2_pairs(_mm256_loadu_pd(p + 2 * i)));
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::norm(z[i]));
  return std::sqrt(r);
}

double max_abs_diff_avx2(const Complex* a, const Complex* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i));
    m = _mm256_max_pd(m, abs2_pairs(d));
  }
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::norm(a[i] - b[i]));
  return std::sqrt(r);
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable table{Isa::Avx2, sum_abs2_avx2, max_abs_avx2, max_abs_diff_avx2};
  return table;
}

}  // namespace halfstep::simd
