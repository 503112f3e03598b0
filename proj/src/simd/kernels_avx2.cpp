#include <immintrin.h>

#include "tradelab/simd/kernels.hpp"

namespace tradelab::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

// Work on raw pointers: inline library templates instantiated in this
// translation unit would carry AVX2 code and could be merged by the linker
// into callers on the scalar path.
static double dot_ptr(const double* pa, const double* pb, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += pa[i] * pb[i];
  return acc;
}

static void axpy_ptr(double alpha, const double* px, double* py, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(py + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), vy);
    _mm256_storeu_pd(py + i, vy);
  }
  for (; i < n; ++i) py[i] += alpha * px[i];
}

double dot(std::span<const double> a, std::span<const double> b) {
  return dot_ptr(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  axpy_ptr(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias,
          std::span<double> y) {
  const double* pw = w.data();
  const double* pb = bias.empty() ? nullptr : bias.data();
  double* py = y.data();
  for (std::size_t r = 0; r < rows; ++r) {
    py[r] = (pb ? pb[r] : 0.0) + dot_ptr(pw + r * cols, x.data(), cols);
  }
}

void gemv_transposed(std::span<const double> w, std::size_t rows,
                     std::size_t cols, std::span<const double> v,
                     std::span<double> y) {
  double* py = y.data();
  for (std::size_t c = 0; c < cols; ++c) py[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) axpy_ptr(v.data()[r], w.data() + r * cols, py, cols);
}

void rank1_update(std::span<double> w, std::size_t rows, std::size_t cols,
                  double alpha, std::span<const double> u,
                  std::span<const double> v) {
  for (std::size_t r = 0; r < rows; ++r) {
    axpy_ptr(alpha * u.data()[r], v.data(), w.data() + r * cols, cols);
  }
}

}  // namespace tradelab::simd::avx2
