#include "simploscore/int_matrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "simploscore/errors.hpp"
#include "simploscore/kernels.hpp"

namespace simploscore {

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::int32_t v) { return v == 0; });
}

bool IntMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = r + 1; c < cols_; ++c) {
      if ((*this)(r, c) != (*this)(c, r)) return false;
    }
  }
  return true;
}

std::int64_t IntMatrix::max_abs() const {
  std::int64_t m = 0;
  for (std::int32_t v : data_) m = std::max<std::int64_t>(m, std::llabs(v));
  return m;
}

namespace {

IntMatrix elementwise(const IntMatrix& a, const IntMatrix& b, int sign) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("matrix shape mismatch");
  IntMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) {
    const std::int64_t v = std::int64_t{a.data()[i]} + sign * std::int64_t{b.data()[i]};
    if (v > std::numeric_limits<std::int32_t>::max() || v < std::numeric_limits<std::int32_t>::min()) {
      throw std::overflow_error("integer matrix sum overflows int32");
    }
    out.data()[i] = static_cast<std::int32_t>(v);
  }
  return out;
}

}  // namespace

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) { return elementwise(a, b, 1); }
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) { return elementwise(a, b, -1); }

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw DomainError("matrix product shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  if (c.rows() == 0 || c.cols() == 0) return c;
  // Bound every partial sum: n * max|a| * max|b|.
  const long double bound = static_cast<long double>(a.cols()) * static_cast<long double>(a.max_abs()) *
                            static_cast<long double>(b.max_abs());
  if (bound > static_cast<long double>(std::numeric_limits<std::int32_t>::max())) {
    throw std::overflow_error("integer matrix product may overflow int32");
  }
  kernels::active().matmul_i32(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

void write_matrix_csv(std::ostream& out, const IntMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
}

}  // namespace simploscore
