#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "halfstep/simd.hpp"

using halfstep::simd::Complex;
namespace simd = halfstep::simd;

namespace {

std::vector<Complex> sample_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd(0.0, 3.0);
  std::vector<Complex> v(n);
  for (auto& z : v) z = Complex(nd(rng), nd(rng));
  return v;
}

std::vector<const simd::KernelTable*> tables() {
  std::vector<const simd::KernelTable*> t{&simd::scalar_kernels()};
  if (auto* a = simd::avx2_kernels()) t.push_back(a);
  if (auto* n = simd::neon_kernels()) t.push_back(n);
  return t;
}

}  // namespace

TEST(Simd, ScalarMatchesDefinition) {
  const std::vector<Complex> v{{3, 4}, {0, -1}, {-2, 0}};
  const auto& s = simd::scalar_kernels();
  EXPECT_DOUBLE_EQ(s.sum_abs2(v.data(), v.size()), 30.0);
  EXPECT_DOUBLE_EQ(s.max_abs(v.data(), v.size()), 5.0);
  const std::vector<Complex> w{{3, 4}, {0, 1}, {-2, 0}};
  EXPECT_DOUBLE_EQ(s.max_abs_diff(v.data(), w.data(), v.size()), 2.0);
}

TEST(Simd, EmptyInputs) {
  for (const auto* t : tables()) {
    EXPECT_EQ(t->sum_abs2(nullptr, 0), 0.0);
    EXPECT_EQ(t->max_abs(nullptr, 0), 0.0);
    EXPECT_EQ(t->max_abs_diff(nullptr, nullptr, 0), 0.0);
  }
}

// Every length up to a few vector widths, so remainder loops are covered.
TEST(Simd, VariantsAgreeWithScalar) {
  const auto& ref = simd::scalar_kernels();
  for (std::size_t n = 0; n < 40; ++n) {
    const auto a = sample_vector(n, static_cast<unsigned>(n));
    const auto b = sample_vector(n, static_cast<unsigned>(n + 1000));
    const double s = ref.sum_abs2(a.data(), n);
    for (const auto* t : tables()) {
      EXPECT_NEAR(t->sum_abs2(a.data(), n), s, 1e-12 * std::max(1.0, s)) << simd::isa_name(t->isa) << " n=" << n;
      EXPECT_DOUBLE_EQ(t->max_abs(a.data(), n), ref.max_abs(a.data(), n)) << simd::isa_name(t->isa);
      EXPECT_DOUBLE_EQ(t->max_abs_diff(a.data(), b.data(), n), ref.max_abs_diff(a.data(), b.data(), n));
    }
  }
}

TEST(Simd, LargeInputAgreement) {
  const auto a = sample_vector(100003, 7);
  const double s = simd::scalar_kernels().sum_abs2(a.data(), a.size());
  for (const auto* t : tables()) EXPECT_NEAR(t->sum_abs2(a.data(), a.size()), s, 1e-11 * s);
}

TEST(Simd, MaxAbsPropagatesInfinity) {
  std::vector<Complex> v(9, Complex(1, 1));
  v[5] = Complex(std::numeric_limits<double>::infinity(), 0);
  for (const auto* t : tables()) EXPECT_TRUE(std::isinf(t->max_abs(v.data(), v.size())));
}

TEST(Simd, ActiveTableIsOneOfTheVariants) {
  const auto& a = simd::active();
  bool found = false;
  for (const auto* t : tables()) found = found || t == &a;
  EXPECT_TRUE(found);
  EXPECT_FALSE(simd::isa_name(a.isa).empty());
}
