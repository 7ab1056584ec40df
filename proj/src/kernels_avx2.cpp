// AVX2 variants. This translation unit is compiled with -mavx2 -mfma and is
// only reached through the runtime dispatcher after a cpuid check.

#include "wilcfar/kernels.hpp"

#include <immintrin.h>

namespace wilcfar::kernels {

namespace {

std::int64_t count_ge_avx2(double x, const double* v, std::size_t n) {
  const __m256d vx = _mm256_set1_pd(x);
  std::int64_t c = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const int m0 = _mm256_movemask_pd(_mm256_cmp_pd(vx, _mm256_loadu_pd(v + i), _CMP_GE_OQ));
    const int m1 = _mm256_movemask_pd(_mm256_cmp_pd(vx, _mm256_loadu_pd(v + i + 4), _CMP_GE_OQ));
    const int m2 = _mm256_movemask_pd(_mm256_cmp_pd(vx, _mm256_loadu_pd(v + i + 8), _CMP_GE_OQ));
    const int m3 = _mm256_movemask_pd(_mm256_cmp_pd(vx, _mm256_loadu_pd(v + i + 12), _CMP_GE_OQ));
    c += __builtin_popcount(m0 | (m1 << 4) | (m2 << 8) | (m3 << 12));
  }
  for (; i + 4 <= n; i += 4) {
    c += __builtin_popcount(
        _mm256_movemask_pd(_mm256_cmp_pd(vx, _mm256_loadu_pd(v + i), _CMP_GE_OQ)));
  }
  for (; i < n; ++i) c += (x >= v[i]) ? 1 : 0;
  return c;
}

double hsum(__m256d a) {
  const __m128d lo = _mm256_castpd256_pd128(a);
  const __m128d hi = _mm256_extractf128_pd(a, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
}

double sum_avx2(const double* v, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(v + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(v + i + 4));
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += v[i];
  return s;
}

double sum_sq_avx2(const double* v, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a = _mm256_loadu_pd(v + i);
    const __m256d b = _mm256_loadu_pd(v + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += v[i] * v[i];
  return s;
}

}  // namespace

const Ops& avx2_ops();
const Ops& avx2_ops() {
  static const Ops ops{"avx2", &count_ge_avx2, &sum_avx2, &sum_sq_avx2};
  return ops;
}

}  // namespace wilcfar::kernels
