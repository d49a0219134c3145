#include <algorithm>

#include "kernels_internal.hpp"

namespace simploscore::kernels {

namespace {

void matmul_i32_scalar(const std::int32_t* a, const std::int32_t* b, std::int32_t* c, std::size_t m,
                       std::size_t n, std::size_t p) {
  std::fill(c, c + m * p, 0);
  for (std::size_t i = 0; i < m; ++i) {
    std::int32_t* crow = c + i * p;
    for (std::size_t k = 0; k < n; ++k) {
      const std::int32_t aik = a[i * n + k];
      if (aik == 0) continue;
      const std::int32_t* brow = b + k * p;
      for (std::size_t j = 0; j < p; ++j) crow[j] += aik * brow[j];
    }
  }
}

double dot_f64_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_f64_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", matmul_i32_scalar, dot_f64_scalar, axpy_f64_scalar};
  return table;
}

}  // namespace simploscore::kernels
