#include <atomic>

#include "bosonlab/kernels.hpp"

namespace bosonlab::kernels {
namespace {

Backend detect() noexcept {
#if defined(BOSONLAB_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> b{detect()};
  return b;
}

}  // namespace

Backend detected_backend() noexcept {
  static const Backend b = detect();
  return b;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

Backend set_backend(Backend requested) noexcept {
  const Backend chosen =
      (requested == Backend::avx2 && detected_backend() != Backend::avx2) ? Backend::scalar : requested;
  current().store(chosen, std::memory_order_relaxed);
  return chosen;
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

#if defined(BOSONLAB_HAVE_AVX2_KERNELS)
#define BOSONLAB_DISPATCH(fn, ...) \
  (active_backend() == Backend::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define BOSONLAB_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

cplx dot(std::span<const cplx> x, std::span<const cplx> y) { return BOSONLAB_DISPATCH(dot, x, y); }

double norm_sq(std::span<const cplx> x) { return BOSONLAB_DISPATCH(norm_sq, x); }

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) { BOSONLAB_DISPATCH(axpy, a, x, y); }

void scale(cplx a, std::span<cplx> x) { BOSONLAB_DISPATCH(scale, a, x); }

double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x) {
  return BOSONLAB_DISPATCH(weighted_norm_sq, w, x);
}

void tridiag_matvec(std::span<const cplx> lower, std::span<const cplx> diag,
                    std::span<const cplx> upper, std::span<const cplx> x,
                    std::span<cplx> y) {
  BOSONLAB_DISPATCH(tridiag_matvec, lower, diag, upper, x, y);
}

#undef BOSONLAB_DISPATCH

}  // namespace bosonlab::kernels
