#pragma once

// Inner-loop kernels for complex state vectors.
//
// Every kernel has a portable scalar implementation and, on x86-64, an
// AVX2/FMA variant. The variant is chosen once at startup from CPUID and can
// be pinned with set_backend() (tests use this to compare the two paths).
// Reductions run in a fixed order for a given backend, so results are
// reproducible run to run on the same machine.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace bosonlab::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

/// Backend currently used by the dispatching entry points.
Backend active_backend() noexcept;

/// Best backend the running CPU supports.
Backend detected_backend() noexcept;

/// Pins the dispatch target. Requesting avx2 on a CPU without it falls back to
/// scalar; the return value is the backend actually selected.
Backend set_backend(Backend requested) noexcept;

std::string_view backend_name(Backend b) noexcept;

// Dispatching entry points -------------------------------------------------

/// sum_i conj(x_i) * y_i
cplx dot(std::span<const cplx> x, std::span<const cplx> y);

/// sum_i |x_i|^2
double norm_sq(std::span<const cplx> x);

/// y += a * x
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);

/// x *= a
void scale(cplx a, std::span<cplx> x);

/// sum_i w_i |x_i|^2 for real weights w.
double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x);

/// y = T x for the tridiagonal T with sub-diagonal `lower` (n-1), diagonal
/// `diag` (n) and super-diagonal `upper` (n-1).
void tridiag_matvec(std::span<const cplx> lower, std::span<const cplx> diag,
                    std::span<const cplx> upper, std::span<const cplx> x,
                    std::span<cplx> y);

// Backend-specific implementations, exposed for equivalence testing -------

namespace scalar {
cplx dot(std::span<const cplx> x, std::span<const cplx> y);
double norm_sq(std::span<const cplx> x);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void scale(cplx a, std::span<cplx> x);
double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x);
void tridiag_matvec(std::span<const cplx> lower, std::span<const cplx> diag,
                    std::span<const cplx> upper, std::span<const cplx> x,
                    std::span<cplx> y);
}  // namespace scalar

#if defined(BOSONLAB_HAVE_AVX2_KERNELS)
namespace avx2 {
cplx dot(std::span<const cplx> x, std::span<const cplx> y);
double norm_sq(std::span<const cplx> x);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void scale(cplx a, std::span<cplx> x);
double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x);
void tridiag_matvec(std::span<const cplx> lower, std::span<const cplx> diag,
                    std::span<const cplx> upper, std::span<const cplx> x,
                    std::span<cplx> y);
}  // namespace avx2
#endif

}  // namespace bosonlab::kernels
