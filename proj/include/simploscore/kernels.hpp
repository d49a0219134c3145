#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace simploscore::kernels {

// C[m x p] = A[m x n] * B[n x p], row-major int32. The caller guarantees that
// no partial sum overflows int32 (see matmul_fits_i32).
using MatmulI32Fn = void (*)(const std::int32_t* a, const std::int32_t* b, std::int32_t* c, std::size_t m,
                             std::size_t n, std::size_t p);
using DotF64Fn = double (*)(const double* x, const double* y, std::size_t n);
// y += alpha * x
using AxpyF64Fn = void (*)(double alpha, const double* x, double* y, std::size_t n);

struct KernelTable {
  std::string_view name;
  MatmulI32Fn matmul_i32;
  DotF64Fn dot_f64;
  AxpyF64Fn axpy_f64;
};

const KernelTable& scalar_table();

// Every variant that is compiled in and supported by the running CPU, scalar first.
std::vector<const KernelTable*> available_tables();

// Chosen once: the widest supported variant, unless SIMPLOSCORE_SIMD=scalar.
const KernelTable& active();

}  // namespace simploscore::kernels
