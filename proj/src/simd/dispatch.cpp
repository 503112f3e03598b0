#include <atomic>
#include <cstdlib>
#include <string>

#include "tradelab/errors.hpp"
#include "tradelab/simd/kernels.hpp"

namespace tradelab::simd {

namespace {

bool cpu_has_avx2() {
#if defined(TRADELAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("TRADELAB_ISA")) {
    const std::string choice(env);
    if (choice == "scalar") return Isa::Scalar;
    if (choice == "avx2" && cpu_has_avx2()) return Isa::Avx2;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

void require(bool ok, const char* what) {
  if (!ok) throw UsageError(std::string("simd: ") + what);
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  return isa == Isa::Scalar || (isa == Isa::Avx2 && cpu_has_avx2());
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  require(isa_supported(isa), "requested ISA is not supported on this CPU");
  current().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: length mismatch");
#ifdef TRADELAB_HAVE_AVX2
  if (active_isa() == Isa::Avx2) return avx2::dot(a, b);
#endif
  return scalar::dot(a, b);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require(x.size() == y.size(), "axpy: length mismatch");
#ifdef TRADELAB_HAVE_AVX2
  if (active_isa() == Isa::Avx2) return avx2::axpy(alpha, x, y);
#endif
  scalar::axpy(alpha, x, y);
}

void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> bias,
          std::span<double> y) {
  require(w.size() == rows * cols, "gemv: matrix size mismatch");
  require(x.size() == cols && y.size() == rows, "gemv: vector size mismatch");
  require(bias.empty() || bias.size() == rows, "gemv: bias size mismatch");
#ifdef TRADELAB_HAVE_AVX2
  if (active_isa() == Isa::Avx2) return avx2::gemv(w, rows, cols, x, bias, y);
#endif
  scalar::gemv(w, rows, cols, x, bias, y);
}

void gemv_transposed(std::span<const double> w, std::size_t rows,
                     std::size_t cols, std::span<const double> v,
                     std::span<double> y) {
  require(w.size() == rows * cols, "gemv_transposed: matrix size mismatch");
  require(v.size() == rows && y.size() == cols,
          "gemv_transposed: vector size mismatch");
#ifdef TRADELAB_HAVE_AVX2
  if (active_isa() == Isa::Avx2) return avx2::gemv_transposed(w, rows, cols, v, y);
#endif
  scalar::gemv_transposed(w, rows, cols, v, y);
}

void rank1_update(std::span<double> w, std::size_t rows, std::size_t cols,
                  double alpha, std::span<const double> u,
                  std::span<const double> v) {
  require(w.size() == rows * cols, "rank1_update: matrix size mismatch");
  require(u.size() == rows && v.size() == cols,
          "rank1_update: vector size mismatch");
#ifdef TRADELAB_HAVE_AVX2
  if (active_isa() == Isa::Avx2) return avx2::rank1_update(w, rows, cols, alpha, u, v);
#endif
  scalar::rank1_update(w, rows, cols, alpha, u, v);
}

}  // namespace tradelab::simd
