// AVX2 kernel variants. This TU is the only one compiled with -mavx2; the
// dispatcher in kernels.cpp guards it behind a cpuid check.

#include <immintrin.h>

#include "uavnet/kernels.hpp"

namespace uavnet::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double reduce_add_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, prod);
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

void mul_accumulate_avx2(double* acc, const double* x, const double* y,
                         std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), prod));
  }
  for (; i < n; ++i) acc[i] += x[i] * y[i];
}

double waterfill_sum_avx2(const double* shares, const double* floors,
                          double inv_level, double p_max, std::size_t n) {
  const __m256d vinv = _mm256_set1_pd(inv_level);
  const __m256d vmax = _mm256_set1_pd(p_max);
  const __m256d vzero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_sub_pd(_mm256_mul_pd(_mm256_loadu_pd(shares + i), vinv),
                              _mm256_loadu_pd(floors + i));
    p = _mm256_min_pd(vmax, _mm256_max_pd(vzero, p));
    acc = _mm256_add_pd(acc, p);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    double p = shares[i] * inv_level - floors[i];
    if (p < 0.0) p = 0.0;
    if (p > p_max) p = p_max;
    total += p;
  }
  return total;
}

void waterfill_fill_avx2(double* out, const double* shares,
                         const double* floors, double inv_level, double p_max,
                         std::size_t n) {
  const __m256d vinv = _mm256_set1_pd(inv_level);
  const __m256d vmax = _mm256_set1_pd(p_max);
  const __m256d vzero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_sub_pd(_mm256_mul_pd(_mm256_loadu_pd(shares + i), vinv),
                              _mm256_loadu_pd(floors + i));
    p = _mm256_min_pd(vmax, _mm256_max_pd(vzero, p));
    _mm256_storeu_pd(out + i, p);
  }
  for (; i < n; ++i) {
    double p = shares[i] * inv_level - floors[i];
    if (p < 0.0) p = 0.0;
    if (p > p_max) p = p_max;
    out[i] = p;
  }
}

}  // namespace uavnet::kernels::detail
