// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <algorithm>

#include "kernels_internal.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace simploscore::kernels::detail {

namespace {

void matmul_i32_avx2(const std::int32_t* a, const std::int32_t* b, std::int32_t* c, std::size_t m,
                     std::size_t n, std::size_t p) {
  std::fill(c, c + m * p, 0);
  for (std::size_t i = 0; i < m; ++i) {
    std::int32_t* crow = c + i * p;
    for (std::size_t k = 0; k < n; ++k) {
      const std::int32_t aik = a[i * n + k];
      if (aik == 0) continue;
      const std::int32_t* brow = b + k * p;
      const __m256i va = _mm256_set1_epi32(aik);
      std::size_t j = 0;
      for (; j + 8 <= p; j += 8) {
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(brow + j));
        __m256i vc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(crow + j));
        vc = _mm256_add_epi32(vc, _mm256_mullo_epi32(va, vb));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(crow + j), vc);
      }
      for (; j < p; ++j) crow[j] += aik * brow[j];
    }
  }
}

double dot_f64_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_f64_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{"avx2", matmul_i32_avx2, dot_f64_avx2, axpy_f64_avx2};
  return &table;
}

}  // namespace simploscore::kernels::detail

#else

namespace simploscore::kernels::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace simploscore::kernels::detail

#endif
