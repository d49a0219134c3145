#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace simploscore {

// Dense row-major integer matrix. Boundary and Laplacian entries are small, so int32 suffices;
// products check their worst-case magnitude before running.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::int32_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int32_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const std::int32_t> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::int32_t* data() const { return data_.data(); }
  std::int32_t* data() { return data_.data(); }

  IntMatrix transposed() const;
  bool is_zero() const;
  bool is_symmetric() const;
  std::int64_t max_abs() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int32_t> data_;
};

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);

// Uses the active SIMD kernel. Throws std::overflow_error when int32 accumulation could overflow.
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

void write_matrix_csv(std::ostream& out, const IntMatrix& m);

}  // namespace simploscore
