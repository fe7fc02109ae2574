#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "bosonlab/kernels.hpp"

using namespace bosonlab;
using bosonlab::kernels::Backend;
using cplx = bosonlab::kernels::cplx;

namespace {

std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("scalar kernels match textbook loops") {
  std::vector<cplx> x = {{1, 2}, {3, -1}, {0, 1}};
  std::vector<cplx> y = {{2, 0}, {1, 1}, {-1, 0}};
  // conj(x) . y
  const cplx expect = std::conj(x[0]) * y[0] + std::conj(x[1]) * y[1] + std::conj(x[2]) * y[2];
  CHECK(std::abs(kernels::scalar::dot(x, y) - expect) < 1e-15);
  CHECK(kernels::scalar::norm_sq(x) == doctest::Approx(5 + 10 + 1));
  std::vector<double> w = {1.0, 0.0, 2.0};
  CHECK(kernels::scalar::weighted_norm_sq(w, x) == doctest::Approx(5 + 2));

  kernels::scalar::axpy({0, 1}, x, y);
  CHECK(std::abs(y[0] - cplx(0, 1)) < 1e-15);
  kernels::scalar::scale(2.0, y);
  CHECK(std::abs(y[0] - cplx(0, 2)) < 1e-15);

  std::vector<cplx> lower = {1.0, 2.0}, diag = {3.0, 4.0, 5.0}, upper = {6.0, 7.0};
  std::vector<cplx> v = {1.0, 1.0, 1.0}, out(3);
  kernels::scalar::tridiag_matvec(lower, diag, upper, v, out);
  CHECK(out[0].real() == 9.0);
  CHECK(out[1].real() == 1.0 + 4.0 + 7.0);
  CHECK(out[2].real() == 2.0 + 5.0);
}

TEST_CASE("backend selection is explicit and reversible") {
  const Backend original = kernels::active_backend();
  CHECK(kernels::set_backend(Backend::scalar) == Backend::scalar);
  CHECK(kernels::active_backend() == Backend::scalar);
  CHECK(kernels::set_backend(original) == original);
  CHECK(kernels::active_backend() == original);
  CHECK(kernels::backend_name(Backend::scalar) == "scalar");
}

#if defined(BOSONLAB_HAVE_AVX2_KERNELS)
TEST_CASE("AVX2 kernels agree with the scalar reference for every length 0..67") {
  if (kernels::detected_backend() != Backend::avx2) {
    MESSAGE("CPU lacks AVX2/FMA; equivalence test skipped");
    return;
  }
  std::mt19937_64 rng(12345);
  for (std::size_t n = 0; n <= 67; ++n) {
    CAPTURE(n);
    const auto x = random_vector(n, rng);
    const auto y = random_vector(n, rng);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = double(i % 7) - 1.5;

    const double scale = 1.0 + double(n);
    CHECK(std::abs(kernels::avx2::dot(x, y) - kernels::scalar::dot(x, y)) <= 1e-13 * scale);
    CHECK(std::abs(kernels::avx2::norm_sq(x) - kernels::scalar::norm_sq(x)) <= 1e-13 * scale);
    CHECK(std::abs(kernels::avx2::weighted_norm_sq(w, x) - kernels::scalar::weighted_norm_sq(w, x)) <=
          1e-13 * scale);

    auto ya = y, ys = y;
    kernels::avx2::axpy({0.3, -1.7}, x, ya);
    kernels::scalar::axpy({0.3, -1.7}, x, ys);
    CHECK(max_diff(ya, ys) <= 1e-14);

    auto xa = x, xs = x;
    kernels::avx2::scale({-0.25, 2.0}, xa);
    kernels::scalar::scale({-0.25, 2.0}, xs);
    CHECK(max_diff(xa, xs) <= 1e-14);

    if (n >= 1) {
      const auto lower = random_vector(n - 1, rng);
      const auto diag = random_vector(n, rng);
      const auto upper = random_vector(n - 1, rng);
      std::vector<cplx> oa(n), os(n);
      kernels::avx2::tridiag_matvec(lower, diag, upper, x, oa);
      kernels::scalar::tridiag_matvec(lower, diag, upper, x, os);
      CHECK(max_diff(oa, os) <= 1e-13);
    }
  }
}

TEST_CASE("dispatching entry points follow the selected backend") {
  if (kernels::detected_backend() != Backend::avx2) return;
  std::mt19937_64 rng(7);
  const auto x = random_vector(33, rng);
  const auto y = random_vector(33, rng);
  const Backend original = kernels::active_backend();
  kernels::set_backend(Backend::avx2);
  const cplx fast = kernels::dot(x, y);
  kernels::set_backend(Backend::scalar);
  const cplx slow = kernels::dot(x, y);
  kernels::set_backend(original);
  CHECK(fast == kernels::avx2::dot(x, y));
  CHECK(slow == kernels::scalar::dot(x, y));
}
#endif
