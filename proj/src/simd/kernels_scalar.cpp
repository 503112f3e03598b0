#include "tradelab/simd/kernels.hpp"

namespace tradelab::simd::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias,
          std::span<double> y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double base = bias.empty() ? 0.0 : bias[r];
    y[r] = base + dot(w.subspan(r * cols, cols), x);
  }
}

void gemv_transposed(std::span<const double> w, std::size_t rows,
                     std::size_t cols, std::span<const double> v,
                     std::span<double> y) {
  for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) axpy(v[r], w.subspan(r * cols, cols), y);
}

void rank1_update(std::span<double> w, std::size_t rows, std::size_t cols,
                  double alpha, std::span<const double> u,
                  std::span<const double> v) {
  for (std::size_t r = 0; r < rows; ++r) {
    axpy(alpha * u[r], v, w.subspan(r * cols, cols));
  }
}

}  // namespace tradelab::simd::scalar
