// AVX2 variants. Compiled with -mavx2 only for this translation unit; the
// dispatcher guards them behind a CPUID check. FMA is deliberately not used
// so the scalar and vector paths stay within a few ulps of each other.

#include <immintrin.h>

#include "rcnet/kernels.hpp"

namespace rcnet::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void matvec_avx2(const double* a, const double* x, double* y, std::size_t m,
                 std::size_t n) {
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = a + i * n;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < n4; j += 4)
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(row + j),
                                             _mm256_loadu_pd(x + j)));
    double s = hsum(acc);
    for (std::size_t j = n4; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void poly_rhs_avx2(const double* r, const double* c, double lambda, double p1,
                   double p2, double p3, double* out, std::size_t n) {
  const __m256d vl = _mm256_set1_pd(lambda);
  const __m256d v1 = _mm256_set1_pd(p1);
  const __m256d v2 = _mm256_set1_pd(p2);
  const __m256d v3 = _mm256_set1_pd(p3);
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d ri = _mm256_loadu_pd(r + i);
    __m256d poly = _mm256_add_pd(_mm256_mul_pd(v3, ri), v2);   // p3 r + p2
    poly = _mm256_add_pd(_mm256_mul_pd(poly, ri), v1);          // (..)r + p1
    poly = _mm256_mul_pd(poly, ri);                             // (..)r
    poly = _mm256_add_pd(poly, _mm256_loadu_pd(c + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vl, poly));
  }
  for (std::size_t i = n4; i < n; ++i) {
    const double ri = r[i];
    out[i] = lambda * (((p3 * ri + p2) * ri + p1) * ri + c[i]);
  }
}

void axpy_avx2(const double* r, const double* k, double h, double* out, std::size_t n) {
  const __m256d vh = _mm256_set1_pd(h);
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_add_pd(_mm256_loadu_pd(r + i),
                                   _mm256_mul_pd(vh, _mm256_loadu_pd(k + i))));
  for (std::size_t i = n4; i < n; ++i) out[i] = r[i] + h * k[i];
}

void rk4_combine_avx2(double* r, const double* k1, const double* k2, const double* k3,
                      const double* k4, double h, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(h / 6.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(k1 + i),
                              _mm256_mul_pd(two, _mm256_loadu_pd(k2 + i)));
    s = _mm256_add_pd(s, _mm256_mul_pd(two, _mm256_loadu_pd(k3 + i)));
    s = _mm256_add_pd(s, _mm256_loadu_pd(k4 + i));
    _mm256_storeu_pd(r + i, _mm256_add_pd(_mm256_loadu_pd(r + i), _mm256_mul_pd(vc, s)));
  }
  const double c = h / 6.0;
  for (std::size_t i = n4; i < n; ++i)
    r[i] += c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace rcnet::kernels::detail
