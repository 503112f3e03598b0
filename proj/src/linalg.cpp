#include "tradelab/linalg.hpp"

#include <cmath>

#include "tradelab/errors.hpp"
#include "tradelab/simd/kernels.hpp"

namespace tradelab {

void Matrix::append_row(std::span<const double> values) {
  if (rows == 0 && cols == 0) cols = values.size();
  if (values.size() != cols) throw UsageError("row length does not match matrix width");
  data.insert(data.end(), values.begin(), values.end());
  ++rows;
}

Matrix gram(const Matrix& x) {
  Matrix g(x.cols, x.cols);
  for (std::size_t r = 0; r < x.rows; ++r) {
    simd::rank1_update(g.data, x.cols, x.cols, 1.0, x.row(r), x.row(r));
  }
  return g;
}

std::vector<double> transpose_times(const Matrix& x, std::span<const double> y) {
  std::vector<double> out(x.cols);
  simd::gemv_transposed(x.data, x.rows, x.cols, y, out);
  return out;
}

std::vector<double> solve_spd(const Matrix& a, std::span<const double> b) {
  const std::size_t n = a.rows;
  if (a.cols != n || b.size() != n) throw UsageError("solve_spd: shape mismatch");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw NumericalError("normal equations are not positive definite");
    }
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  std::vector<double> z(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) z[i] -= l(i, k) * z[k];
    z[i] /= l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) z[i] -= l(k, i) * z[k];
    z[i] /= l(i, i);
  }
  return z;
}

}  // namespace tradelab
