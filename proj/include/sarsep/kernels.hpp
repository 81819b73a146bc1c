// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>

namespace sarsep::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

bool avx2_available();
// Chosen once from the CPU; SARSEP_SIMD=scalar in the environment forces the
// reference path.
Isa active_isa();
void force_isa(Isa isa);
const char* isa_name(Isa isa);

// x[k] *= exp(i k theta) for k = 0..n-1.
void phase_ramp(cplx* x, std::size_t n, double theta);
// out[k] = sign(in[k]) max(|in[k]| - tau, 0); in and out may alias.
void soft_threshold(const double* in, double* out, std::size_t n, double tau);
// acc[k] += |x[k]|
void abs_accumulate(double* acc, const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
// sum_k |a[k] - 2 b[k] + c[k]|
double second_diff_abs_sum(const double* a, const double* b, const double* c, std::size_t n);

namespace scalar {
void phase_ramp(cplx* x, std::size_t n, double theta);
void soft_threshold(const double* in, double* out, std::size_t n, double tau);
void abs_accumulate(double* acc, const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double second_diff_abs_sum(const double* a, const double* b, const double* c, std::size_t n);
}  // namespace scalar

namespace avx2 {
void phase_ramp(cplx* x, std::size_t n, double theta);
void soft_threshold(const double* in, double* out, std::size_t n, double tau);
void abs_accumulate(double* acc, const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double second_diff_abs_sum(const double* a, const double* b, const double* c, std::size_t n);
}  // namespace avx2

// Exact phase re-seeding interval for phase_ramp.
inline constexpr std::size_t kRampBlock = 32;

}  // namespace sarsep::kernels
