#include "bosonlab/kernels.hpp"

namespace bosonlab::kernels::scalar {

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double norm_sq(std::span<const cplx> x) {
  double acc = 0.0;
  for (const cplx& v : x) acc += v.real() * v.real() + v.imag() * v.imag();
  return acc;
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(cplx a, std::span<cplx> x) {
  for (cplx& v : x) v *= a;
}

double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return acc;
}

void tridiag_matvec(std::span<const cplx> lower, std::span<const cplx> diag,
                    std::span<const cplx> upper, std::span<const cplx> x,
                    std::span<cplx> y) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  if (n == 1) {
    y[0] = diag[0] * x[0];
    return;
  }
  y[0] = diag[0] * x[0] + upper[0] * x[1];
  for (std::size_t i = 1; i + 1 < n; ++i)
    y[i] = lower[i - 1] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
  y[n - 1] = lower[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1];
}

}  // namespace bosonlab::kernels::scalar
