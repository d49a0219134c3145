#include <algorithm>

#include "kernels_internal.hpp"

#if defined(__ARM_NEON) || defined(__aarch64__)
#include <arm_neon.h>

namespace simploscore::kernels::detail {

namespace {

void matmul_i32_neon(const std::int32_t* a, const std::int32_t* b, std::int32_t* c, std::size_t m,
                     std::size_t n, std::size_t p) {
  std::fill(c, c + m * p, 0);
  for (std::size_t i = 0; i < m; ++i) {
    std::int32_t* crow = c + i * p;
    for (std::size_t k = 0; k < n; ++k) {
      const std::int32_t aik = a[i * n + k];
      if (aik == 0) continue;
      const std::int32_t* brow = b + k * p;
      std::size_t j = 0;
      for (; j + 4 <= p; j += 4) {
        vst1q_s32(crow + j, vmlaq_n_s32(vld1q_s32(crow + j), vld1q_s32(brow + j), aik));
      }
      for (; j < p; ++j) crow[j] += aik * brow[j];
    }
  }
}

double dot_f64_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_f64_neon(double alpha, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_n_f64(vld1q_f64(y + i), vld1q_f64(x + i), alpha));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table{"neon", matmul_i32_neon, dot_f64_neon, axpy_f64_neon};
  return &table;
}

}  // namespace simploscore::kernels::detail

#else

namespace simploscore::kernels::detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace simploscore::kernels::detail

#endif
