#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tradelab {

/// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return std::span<double>(data).subspan(r * cols, cols); }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data).subspan(r * cols, cols);
  }
  void append_row(std::span<const double> values);
};

/// Gram matrix X^T X.
Matrix gram(const Matrix& x);

/// X^T y
std::vector<double> transpose_times(const Matrix& x, std::span<const double> y);

/// Solves A z = b for symmetric positive-definite A by Cholesky.
/// Throws NumericalError if A is not numerically positive definite.
std::vector<double> solve_spd(const Matrix& a, std::span<const double> b);

}  // namespace tradelab
