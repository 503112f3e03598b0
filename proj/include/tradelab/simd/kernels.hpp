#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision kernels used by the linear Q agent, the MLP engine
// and the least-squares solver. Every kernel has a portable scalar reference
// in tradelab::simd::scalar and, on x86-64, an AVX2+FMA variant in
// tradelab::simd::avx2. The free functions in tradelab::simd dispatch to the
// best variant supported by the running CPU.
//
// Matrices are row-major: element (r, c) lives at w[r * cols + c].

namespace tradelab::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// True if `isa` was compiled in and the CPU can execute it.
bool isa_supported(Isa isa);

/// The variant the dispatching functions currently use. Defaults to the best
/// supported one; the TRADELAB_ISA environment variable ("scalar" or "avx2")
/// overrides it at first use.
Isa active_isa();

/// Pin the dispatcher (tests and benchmarks). Throws UsageError if the ISA is
/// unsupported. Not thread-safe against concurrent kernel calls.
void set_active_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// y = W x + bias   (W is rows x cols; bias may be empty for no bias)
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias,
          std::span<double> y);

/// y = W^T v        (W is rows x cols, v has rows entries, y has cols)
void gemv_transposed(std::span<const double> w, std::size_t rows,
                     std::size_t cols, std::span<const double> v,
                     std::span<double> y);

/// W += alpha * u v^T   (u has rows entries, v has cols)
void rank1_update(std::span<double> w, std::size_t rows, std::size_t cols,
                  double alpha, std::span<const double> u,
                  std::span<const double> v);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias,
          std::span<double> y);
void gemv_transposed(std::span<const double> w, std::size_t rows,
                     std::size_t cols, std::span<const double> v,
                     std::span<double> y);
void rank1_update(std::span<double> w, std::size_t rows, std::size_t cols,
                  double alpha, std::span<const double> u,
                  std::span<const double> v);
}  // namespace scalar

namespace avx2 {
// Only callable when isa_supported(Isa::Avx2).
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias,
          std::span<double> y);
void gemv_transposed(std::span<const double> w, std::size_t rows,
                     std::size_t cols, std::span<const double> v,
                     std::span<double> y);
void rank1_update(std::span<double> w, std::size_t rows, std::size_t cols,
                  double alpha, std::span<const double> u,
                  std::span<const double> v);
}  // namespace avx2

}  // namespace tradelab::simd
