#include <doctest.h>

#include <random>
#include <stdexcept>

#include "simploscore/int_matrix.hpp"
#include "simploscore/kernels.hpp"

using namespace simploscore;

TEST_CASE("scalar table is always available and listed first") {
  const auto tables = kernels::available_tables();
  REQUIRE_FALSE(tables.empty());
  CHECK(tables.front() == &kernels::scalar_table());
  MESSAGE("active kernel: " << kernels::active().name);
}

TEST_CASE("every kernel variant matches the scalar reference") {
  std::mt19937_64 rng(99);
  const auto& ref = kernels::scalar_table();
  for (const auto* table : kernels::available_tables()) {
    CAPTURE(table->name);
    std::uniform_int_distribution<std::size_t> dim(1, 37);
    std::uniform_int_distribution<int> entry(-3, 3);
    std::uniform_real_distribution<double> real(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t m = dim(rng), n = dim(rng), p = dim(rng);
      std::vector<std::int32_t> a(m * n), b(n * p), c1(m * p, 7), c2(m * p, -7);
      for (auto& x : a) x = entry(rng);
      for (auto& x : b) x = entry(rng);
      ref.matmul_i32(a.data(), b.data(), c1.data(), m, n, p);
      table->matmul_i32(a.data(), b.data(), c2.data(), m, n, p);
      REQUIRE(c1 == c2);

      std::vector<double> x(n), y1(n), y2;
      for (auto& v : x) v = real(rng);
      for (auto& v : y1) v = real(rng);
      y2 = y1;
      const double d1 = ref.dot_f64(x.data(), y1.data(), n);
      const double d2 = table->dot_f64(x.data(), y1.data(), n);
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) scale += std::abs(x[i] * y1[i]);
      CHECK(std::abs(d1 - d2) <= 1e-13 * std::max(scale, 1.0));

      ref.axpy_f64(1.5, x.data(), y1.data(), n);
      table->axpy_f64(1.5, x.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-13 * (std::abs(y1[i]) + 1.0));
    }
  }
}

TEST_CASE("matrix product against a naive triple loop") {
  IntMatrix a(3, 2);
  IntMatrix b(2, 4);
  int v = -4;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) a(i, j) = v++;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 4; ++j) b(i, j) = v++;
  const auto c = multiply(a, b);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      std::int32_t s = 0;
      for (std::size_t k = 0; k < 2; ++k) s += a(i, k) * b(k, j);
      CHECK(c(i, j) == s);
    }
  }
}

TEST_CASE("product refuses shapes that could overflow int32") {
  IntMatrix a(1, 4);
  IntMatrix b(4, 1);
  a(0, 0) = 1 << 20;
  b(0, 0) = 1 << 20;
  CHECK_THROWS_AS(multiply(a, b), std::overflow_error);
}
