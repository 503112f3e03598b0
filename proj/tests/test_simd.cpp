#include <doctest.h>

#include <random>
#include <vector>

#include "tradelab/errors.hpp"
#include "tradelab/simd/kernels.hpp"

using namespace tradelab;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double scale) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12 * scale));
}

// Restores the dispatcher after a test pins it.
struct IsaGuard {
  simd::Isa saved = simd::active_isa();
  ~IsaGuard() { simd::set_active_isa(saved); }
};

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar reference kernels on hand-sized inputs") {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, 5, 6};
  CHECK(simd::scalar::dot(a, b) == 32.0);

  std::vector<double> y{1, 1, 1};
  simd::scalar::axpy(2.0, a, y);
  CHECK(y == std::vector<double>{3, 5, 7});

  // W = [[1,2,3],[4,5,6]]
  const std::vector<double> w{1, 2, 3, 4, 5, 6};
  std::vector<double> out(2);
  simd::scalar::gemv(w, 2, 3, a, std::vector<double>{10, 20}, out);
  CHECK(out == std::vector<double>{24, 52});

  std::vector<double> t(3);
  simd::scalar::gemv_transposed(w, 2, 3, std::vector<double>{1, -1}, t);
  CHECK(t == std::vector<double>{-3, -3, -3});

  std::vector<double> m(6, 0.0);
  simd::scalar::rank1_update(m, 2, 3, 0.5, std::vector<double>{2, 4}, a);
  CHECK(m == std::vector<double>{1, 2, 3, 2, 4, 6});
}

TEST_CASE("avx2 kernels match the scalar reference") {
  if (!simd::isa_supported(simd::Isa::Avx2)) {
    MESSAGE("AVX2 unavailable on this CPU; equivalence check skipped");
    return;
  }
  std::mt19937_64 rng(2024);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto a = random_vector(n, rng);
    const auto b = random_vector(n, rng);
    CHECK(simd::avx2::dot(a, b) == doctest::Approx(simd::scalar::dot(a, b)).epsilon(1e-12));

    auto y1 = random_vector(n, rng);
    auto y2 = y1;
    simd::scalar::axpy(-0.7, a, y1);
    simd::avx2::axpy(-0.7, a, y2);
    check_close(y1, y2, 1.0);
  }
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 23);
    const std::size_t rows = dim(rng);
    const std::size_t cols = dim(rng);
    const auto w = random_vector(rows * cols, rng);
    const auto x = random_vector(cols, rng);
    const auto v = random_vector(rows, rng);
    const auto bias = random_vector(rows, rng);

    std::vector<double> s(rows), a(rows);
    simd::scalar::gemv(w, rows, cols, x, bias, s);
    simd::avx2::gemv(w, rows, cols, x, bias, a);
    check_close(s, a, static_cast<double>(cols));

    std::vector<double> st(cols), at(cols);
    simd::scalar::gemv_transposed(w, rows, cols, v, st);
    simd::avx2::gemv_transposed(w, rows, cols, v, at);
    check_close(st, at, static_cast<double>(rows));

    auto ms = w;
    auto ma = w;
    simd::scalar::rank1_update(ms, rows, cols, 0.3, v, x);
    simd::avx2::rank1_update(ma, rows, cols, 0.3, v, x);
    check_close(ms, ma, 1.0);
  }
}

TEST_CASE("dispatcher honours the pinned ISA and rejects bad shapes") {
  IsaGuard guard;
  simd::set_active_isa(simd::Isa::Scalar);
  CHECK(simd::active_isa() == simd::Isa::Scalar);
  CHECK(simd::isa_name(simd::active_isa()) == "scalar");
  const std::vector<double> a{1, 2, 3, 4, 5};
  CHECK(simd::dot(a, a) == 55.0);

  CHECK_THROWS_AS(simd::dot(a, std::vector<double>{1.0}), UsageError);
  std::vector<double> out(2);
  CHECK_THROWS_AS(simd::gemv(a, 2, 3, std::vector<double>{1, 2, 3}, {}, out), UsageError);
  if (!simd::isa_supported(simd::Isa::Avx2)) {
    CHECK_THROWS_AS(simd::set_active_isa(simd::Isa::Avx2), UsageError);
  }
}

}  // TEST_SUITE
