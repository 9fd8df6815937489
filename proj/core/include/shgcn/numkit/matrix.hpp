#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "shgcn/numkit/precision.hpp"

namespace shgcn::numkit {

// Dense row-major matrix. Every stored value is representable in mode():
// construction rounds the payload, so re-rounding is a no-op. Values are
// immutable once constructed.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, PrecisionMode mode = PrecisionMode::Double);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data,
         PrecisionMode mode = PrecisionMode::Double);

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows,
                          PrecisionMode mode = PrecisionMode::Double);
  static Matrix full(std::size_t rows, std::size_t cols, double value,
                     PrecisionMode mode = PrecisionMode::Double);
  static Matrix identity(std::size_t n, PrecisionMode mode = PrecisionMode::Double);
  static Matrix scalar(double value, PrecisionMode mode = PrecisionMode::Double) {
    return full(1, 1, value, mode);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  PrecisionMode mode() const noexcept { return mode_; }

  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const;
  double item() const;  // value of a 1x1 matrix

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  // Same values re-rounded to another mode.
  Matrix with_mode(PrecisionMode mode) const;
  Matrix transpose() const;

  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) noexcept {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  PrecisionMode mode_ = PrecisionMode::Double;
};

// Product with full-precision accumulation; each output entry is rounded to
// the operands' mode. Throws ShapeError on a.cols != b.rows or mixed modes.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);

// Largest absolute elementwise difference. Shapes must match.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace shgcn::numkit
