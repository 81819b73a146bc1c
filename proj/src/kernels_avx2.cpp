// SPDX-License-Identifier: Apache-2.0
// Built with -mavx2 -mfma; only reached after the runtime CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "sarsep/kernels.hpp"

namespace sarsep::kernels::avx2 {

namespace {

// (a0, a1) * (w0, w1) for interleaved complex pairs.
inline __m256d cmul(__m256d a, __m256d w) {
  const __m256d wr = _mm256_movedup_pd(w);
  const __m256d wi = _mm256_permute_pd(w, 0xF);
  const __m256d as = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, wr, _mm256_mul_pd(as, wi));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));

}  // namespace

void phase_ramp(cplx* x, std::size_t n, double theta) {
  double* p = reinterpret_cast<double*>(x);
  const __m256d step2 = _mm256_setr_pd(std::cos(2 * theta), std::sin(2 * theta),
                                       std::cos(2 * theta), std::sin(2 * theta));
  for (std::size_t k0 = 0; k0 < n; k0 += kRampBlock) {
    const std::size_t k1 = std::min(n, k0 + kRampBlock);
    const double a0 = theta * static_cast<double>(k0);
    const double a1 = theta * static_cast<double>(k0 + 1);
    __m256d w = _mm256_setr_pd(std::cos(a0), std::sin(a0), std::cos(a1), std::sin(a1));
    std::size_t k = k0;
    for (; k + 2 <= k1; k += 2) {
      _mm256_storeu_pd(p + 2 * k, cmul(_mm256_loadu_pd(p + 2 * k), w));
      w = cmul(w, step2);
    }
    if (k < k1) {
      alignas(32) double wv[4];
      _mm256_store_pd(wv, w);
      x[k] *= cplx(wv[0], wv[1]);
    }
  }
}

void soft_threshold(const double* in, double* out, std::size_t n, double tau) {
  const __m256d t = _mm256_set1_pd(tau);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d v = _mm256_loadu_pd(in + k);
    const __m256d sign = _mm256_andnot_pd(kAbsMask, v);
    const __m256d mag = _mm256_max_pd(_mm256_sub_pd(_mm256_and_pd(v, kAbsMask), t), zero);
    _mm256_storeu_pd(out + k, _mm256_or_pd(mag, sign));
  }
  for (; k < n; ++k) {
    const double mag = std::abs(in[k]) - tau;
    out[k] = mag > 0.0 ? std::copysign(mag, in[k]) : 0.0;
  }
}

void abs_accumulate(double* acc, const double* x, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d v = _mm256_and_pd(_mm256_loadu_pd(x + k), kAbsMask);
    _mm256_storeu_pd(acc + k, _mm256_add_pd(_mm256_loadu_pd(acc + k), v));
  }
  for (; k < n; ++k) acc[k] += std::abs(x[k]);
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), s1);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

double second_diff_abs_sum(const double* a, const double* b, const double* c, std::size_t n) {
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d s = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_fnmadd_pd(two, _mm256_loadu_pd(b + k),
                                       _mm256_add_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(c + k)));
    s = _mm256_add_pd(s, _mm256_and_pd(d, kAbsMask));
  }
  double r = hsum(s);
  for (; k < n; ++k) r += std::abs(a[k] - 2.0 * b[k] + c[k]);
  return r;
}

}  // namespace sarsep::kernels::avx2
