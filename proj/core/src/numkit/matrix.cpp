#include "shgcn/numkit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shgcn/error.hpp"

namespace shgcn::numkit {
namespace {

void round_in_place(std::vector<double>& data, PrecisionMode mode) {
  if (mode == PrecisionMode::Double) return;
  for (double& v : data) v = round_to_precision(v, mode);
}

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " + shape_str(b));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, PrecisionMode mode)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0), mode_(mode) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data, PrecisionMode mode)
    : rows_(rows), cols_(cols), data_(std::move(data)), mode_(mode) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("Matrix: payload of " + std::to_string(data_.size()) +
                     " values does not fill " + std::to_string(rows_) + "x" +
                     std::to_string(cols_));
  }
  round_in_place(data_, mode_);
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows,
                         PrecisionMode mode) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("Matrix::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data), mode);
}

Matrix Matrix::full(std::size_t rows, std::size_t cols, double value, PrecisionMode mode) {
  return Matrix(rows, cols, std::vector<double>(rows * cols, value), mode);
}

Matrix Matrix::identity(std::size_t n, PrecisionMode mode) {
  std::vector<double> data(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) data[i * n + i] = 1.0;
  return Matrix(n, n, std::move(data), mode);
}

double Matrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw ShapeError("Matrix::at: index out of range");
  return data_[r * cols_ + c];
}

double Matrix::item() const {
  if (rows_ != 1 || cols_ != 1) throw ShapeError("Matrix::item: not a 1x1 matrix");
  return data_[0];
}

Matrix Matrix::with_mode(PrecisionMode mode) const { return Matrix(rows_, cols_, data_, mode); }

Matrix Matrix::transpose() const {
  std::vector<double> out(data_.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[j * rows_ + i] = data_[i * cols_ + j];
  return Matrix(cols_, rows_, std::move(out), mode_);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ (" + shape_str(a) + " x " + shape_str(b) + ")");
  }
  if (a.mode() != b.mode()) throw ShapeError("matmul: operands use different precision modes");
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  std::vector<double> out(n * m, 0.0);
  const auto ad = a.data();
  const auto bd = b.data();
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = out.data() + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ad[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = bd.data() + p * m;
      for (std::size_t j = 0; j < m; ++j) orow[j] += aip * brow[j];
    }
  }
  return Matrix(n, m, std::move(out), a.mode());
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + b.data()[i];
  return Matrix(a.rows(), a.cols(), std::move(out), a.mode());
}

Matrix sub(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "sub");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] - b.data()[i];
  return Matrix(a.rows(), a.cols(), std::move(out), a.mode());
}

Matrix scale(const Matrix& a, double s) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (double& v : out) v *= s;
  return Matrix(a.rows(), a.cols(), std::move(out), a.mode());
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a.data()[i] - b.data()[i]));
  return worst;
}

}  // namespace shgcn::numkit
