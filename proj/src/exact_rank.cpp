#include <algorithm>
#include <cstdlib>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "simploscore/homology.hpp"

namespace simploscore {

namespace {

struct Int64Overflow {};

struct CheckedInt64 {
  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Int64Overflow{};
    return r;
  }
  static std::int64_t sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw Int64Overflow{};
    return r;
  }
};

template <class T>
T magnitude(const T& v) {
  return v < 0 ? T(-v) : v;
}

// Fraction-free Gaussian elimination. Every intermediate entry is a minor of the input, so the
// division by the previous pivot is exact.
template <class T, class Mul, class Sub>
std::size_t bareiss_rank(std::vector<T> a, std::size_t rows, std::size_t cols, Mul mul, Sub sub) {
  auto at = [&](std::size_t r, std::size_t c) -> T& { return a[r * cols + c]; };
  std::size_t rank = 0;
  T prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rows;
    for (std::size_t r = rank; r < rows; ++r) {
      if (at(r, c) != 0 && (pivot == rows || magnitude(at(r, c)) < magnitude(at(pivot, c)))) pivot = r;
    }
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t j = c; j < cols; ++j) std::swap(at(pivot, j), at(rank, j));
    }
    const T p = at(rank, c);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const T f = at(r, c);
      if (f == 0) {
        if (p != prev) {
          for (std::size_t j = c + 1; j < cols; ++j) at(r, j) = mul(p, at(r, j)) / prev;
        }
        continue;
      }
      for (std::size_t j = c + 1; j < cols; ++j) {
        at(r, j) = sub(mul(p, at(r, j)), mul(f, at(rank, j))) / prev;
      }
      at(r, c) = 0;
    }
    prev = p;
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t exact_rank(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows == 0 || cols == 0) return 0;
  try {
    std::vector<std::int64_t> a(m.data(), m.data() + rows * cols);
    return bareiss_rank(std::move(a), rows, cols, CheckedInt64::mul, CheckedInt64::sub);
  } catch (const Int64Overflow&) {
    using Big = boost::multiprecision::cpp_int;
    std::vector<Big> a(m.data(), m.data() + rows * cols);
    return bareiss_rank(
        std::move(a), rows, cols, [](const Big& x, const Big& y) { return Big(x * y); },
        [](const Big& x, const Big& y) { return Big(x - y); });
  }
}

}  // namespace simploscore
