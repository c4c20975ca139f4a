#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace halfstep::simd {

using Complex = std::complex<double>;

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  // sum of |z|^2
  double (*sum_abs2)(const Complex* z, std::size_t n);
  // max |z|
  double (*max_abs)(const Complex* z, std::size_t n);
  // max |a - b|
  double (*max_abs_diff)(const Complex* a, const Complex* b, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the ISA is not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Selected once: best supported ISA unless HALFSTEP_SIMD=scalar.
const KernelTable& active();

std::string_view isa_name(Isa isa);

inline double sum_abs2(const Complex* z, std::size_t n) { return active().sum_abs2(z, n); }
inline double max_abs(const Complex* z, std::size_t n) { return active().max_abs(z, n); }
inline double max_abs_diff(const Complex* a, const Complex* b, std::size_t n) {
  return active().max_abs_diff(a, b, n);
}

}  // namespace halfstep::simd
