// SPDX-License-Identifier: Apache-2.0
#include "sarsep/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace sarsep::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Isa detect() {
  const char* env = std::getenv("SARSEP_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

std::atomic<int>& isa_slot() {
  static std::atomic<int> slot{static_cast<int>(detect())};
  return slot;
}

}  // namespace

Isa active_isa() { return static_cast<Isa>(isa_slot().load(std::memory_order_relaxed)); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available()) isa = Isa::scalar;
  isa_slot().store(static_cast<int>(isa));
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void phase_ramp(cplx* x, std::size_t n, double theta) {
  if (active_isa() == Isa::avx2) return avx2::phase_ramp(x, n, theta);
  scalar::phase_ramp(x, n, theta);
}

void soft_threshold(const double* in, double* out, std::size_t n, double tau) {
  if (active_isa() == Isa::avx2) return avx2::soft_threshold(in, out, n, tau);
  scalar::soft_threshold(in, out, n, tau);
}

void abs_accumulate(double* acc, const double* x, std::size_t n) {
  if (active_isa() == Isa::avx2) return avx2::abs_accumulate(acc, x, n);
  scalar::abs_accumulate(acc, x, n);
}

double dot(const double* a, const double* b, std::size_t n) {
  if (active_isa() == Isa::avx2) return avx2::dot(a, b, n);
  return scalar::dot(a, b, n);
}

double second_diff_abs_sum(const double* a, const double* b, const double* c, std::size_t n) {
  if (active_isa() == Isa::avx2) return avx2::second_diff_abs_sum(a, b, c, n);
  return scalar::second_diff_abs_sum(a, b, c, n);
}

namespace scalar {

void phase_ramp(cplx* x, std::size_t n, double theta) {
  const cplx step(std::cos(theta), std::sin(theta));
  for (std::size_t k0 = 0; k0 < n; k0 += kRampBlock) {
    const double a = theta * static_cast<double>(k0);
    cplx w(std::cos(a), std::sin(a));
    const std::size_t k1 = std::min(n, k0 + kRampBlock);
    for (std::size_t k = k0; k < k1; ++k) {
      x[k] *= w;
      w *= step;
    }
  }
}

void soft_threshold(const double* in, double* out, std::size_t n, double tau) {
  for (std::size_t k = 0; k < n; ++k) {
    const double v = in[k];
    const double mag = std::abs(v) - tau;
    out[k] = mag > 0.0 ? std::copysign(mag, v) : 0.0;
  }
}

void abs_accumulate(double* acc, const double* x, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) acc[k] += std::abs(x[k]);
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

double second_diff_abs_sum(const double* a, const double* b, const double* c, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::abs(a[k] - 2.0 * b[k] + c[k]);
  return s;
}

}  // namespace scalar

}  // namespace sarsep::kernels
