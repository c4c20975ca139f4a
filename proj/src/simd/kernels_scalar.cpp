#include <algorithm>
#include <cmath>

#include "halfstep/simd.hpp"

namespace halfstep::simd {
namespace {

double sum_abs2_scalar(const Complex* z, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::norm(z[i]);
  return acc;
}

double max_abs_scalar(const Complex* z, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::norm(z[i]));
  return std::sqrt(m);
}

double max_abs_diff_scalar(const Complex* a, const Complex* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::norm(a[i] - b[i]));
  return std::sqrt(m);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, sum_abs2_scalar, max_abs_scalar, max_abs_diff_scalar};
  return table;
}

}  // namespace halfstep::simd
