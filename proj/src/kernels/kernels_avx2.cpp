// AVX2/FMA variants. Compiled with -mavx2 -mfma; only reached through the
// dispatcher after a CPUID check. A __m256d holds two interleaved complex
// doubles (re0, im0, re1, im1).

#include <immintrin.h>

#include "bosonlab/kernels.hpp"

namespace bosonlab::kernels::avx2 {
namespace {

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// (a0*b0, a1*b1) as complex products.
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

// Complex scalar broadcast to both lanes, as (re, re, re, re) and (im, im, im, im).
inline __m256d cmul_scalar(__m256d x, __m256d a_re, __m256d a_im) {
  const __m256d x_sw = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, a_re, _mm256_mul_pd(x_sw, a_im));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  const std::size_t n = x.size();
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(&x[i]);
    const __m256d yv = load2(&y[i]);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
    // (xr*yi, xi*yr) per element; imaginary part is the even minus odd lane.
    acc_im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), acc_im);
  }
  alignas(32) double im_lanes[4];
  _mm256_store_pd(im_lanes, acc_im);
  double re = hsum(acc_re);
  double im = (im_lanes[0] - im_lanes[1]) + (im_lanes[2] - im_lanes[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double norm_sq(std::span<const cplx> x) {
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(&x[i]);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  const std::size_t n = x.size();
  const __m256d a_re = _mm256_set1_pd(a.real());
  const __m256d a_im = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d ax = cmul_scalar(load2(&x[i]), a_re, a_im);
    store2(&y[i], _mm256_add_pd(load2(&y[i]), ax));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale(cplx a, std::span<cplx> x) {
  const std::size_t n = x.size();
  const __m256d a_re = _mm256_set1_pd(a.real());
  const __m256d a_im = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(&x[i], cmul_scalar(load2(&x[i]), a_re, a_im));
  for (; i < n; ++i) x[i] *= a;
}

double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x) {
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(&x[i]);
    // (w0, w0, w1, w1)
    const __m256d wv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(&w[i])), 0x50);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), wv, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

void tridiag_matvec(std::span<const cplx> lower, std::span<const cplx> diag,
                    std::span<const cplx> upper, std::span<const cplx> x,
                    std::span<cplx> y) {
  const std::size_t n = diag.size();
  if (n < 4) {
    scalar::tridiag_matvec(lower, diag, upper, x, y);
    return;
  }
  y[0] = diag[0] * x[0] + upper[0] * x[1];
  std::size_t i = 1;
  for (; i + 2 < n; i += 2) {
    __m256d acc = cmul(load2(&diag[i]), load2(&x[i]));
    acc = _mm256_add_pd(acc, cmul(load2(&lower[i - 1]), load2(&x[i - 1])));
    acc = _mm256_add_pd(acc, cmul(load2(&upper[i]), load2(&x[i + 1])));
    store2(&y[i], acc);
  }
  for (; i + 1 < n; ++i)
    y[i] = lower[i - 1] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
  y[n - 1] = lower[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1];
}

}  // namespace bosonlab::kernels::avx2
