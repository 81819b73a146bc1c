// SPDX-License-Identifier: Apache-2.0
#include "sarsep/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace sarsep {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct AlignedBuf {
  void* p = nullptr;
  std::size_t bytes = 0;
  ~AlignedBuf() { fftw_free(p); }
  void* get(std::size_t need) {
    if (need > bytes) {
      fftw_free(p);
      p = fftw_malloc(need);
      if (!p) throw std::bad_alloc();
      bytes = need;
    }
    return p;
  }
};

thread_local AlignedBuf tl_in;
thread_local AlignedBuf tl_out;

}  // namespace

struct RealFft::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

struct ComplexFft::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("fft length must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  static std::map<std::size_t, std::weak_ptr<Plans>> cache;
  if (auto p = cache[n].lock()) {
    plans_ = p;
    return;
  }
  auto p = std::make_shared<Plans>();
  double* in = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  fftw_complex* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
  p->fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  p->inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), out, in, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  cache[n] = p;
  plans_ = p;
}

RealFft::~RealFft() = default;

void RealFft::forward(const double* in, cplx* out) const {
  auto* bi = static_cast<double*>(tl_in.get(sizeof(double) * n_));
  auto* bo = static_cast<fftw_complex*>(tl_out.get(sizeof(fftw_complex) * bins()));
  std::memcpy(bi, in, sizeof(double) * n_);
  fftw_execute_dft_r2c(plans_->fwd, bi, bo);
  std::memcpy(static_cast<void*>(out), bo, sizeof(fftw_complex) * bins());
}

void RealFft::inverse(const cplx* in, double* out) const {
  auto* bi = static_cast<fftw_complex*>(tl_in.get(sizeof(fftw_complex) * bins()));
  auto* bo = static_cast<double*>(tl_out.get(sizeof(double) * n_));
  std::memcpy(bi, static_cast<const void*>(in), sizeof(fftw_complex) * bins());
  fftw_execute_dft_c2r(plans_->inv, bi, bo);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = bo[i] * scale;
}

ComplexFft::ComplexFft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("fft length must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  static std::map<std::size_t, std::weak_ptr<Plans>> cache;
  if (auto p = cache[n].lock()) {
    plans_ = p;
    return;
  }
  auto p = std::make_shared<Plans>();
  auto* a = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  auto* b = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  p->fwd = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_FORWARD, FFTW_ESTIMATE);
  p->inv = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(a);
  fftw_free(b);
  cache[n] = p;
  plans_ = p;
}

ComplexFft::~ComplexFft() = default;

void ComplexFft::forward(const cplx* in, cplx* out) const {
  auto* bi = static_cast<fftw_complex*>(tl_in.get(sizeof(fftw_complex) * n_));
  auto* bo = static_cast<fftw_complex*>(tl_out.get(sizeof(fftw_complex) * n_));
  std::memcpy(bi, static_cast<const void*>(in), sizeof(fftw_complex) * n_);
  fftw_execute_dft(plans_->fwd, bi, bo);
  std::memcpy(static_cast<void*>(out), bo, sizeof(fftw_complex) * n_);
}

void ComplexFft::inverse(const cplx* in, cplx* out) const {
  auto* bi = static_cast<fftw_complex*>(tl_in.get(sizeof(fftw_complex) * n_));
  auto* bo = static_cast<fftw_complex*>(tl_out.get(sizeof(fftw_complex) * n_));
  std::memcpy(bi, static_cast<const void*>(in), sizeof(fftw_complex) * n_);
  fftw_execute_dft(plans_->inv, bi, bo);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = cplx(bo[i][0], bo[i][1]) * scale;
}

int smooth_gate_length(int m_min) {
  for (int m = std::max(2, m_min + (m_min & 1));; m += 2) {
    int k = m + 1;
    for (int p : {3, 5, 7})
      while (k % p == 0) k /= p;
    if (k == 1) return m;
  }
}

}  // namespace sarsep
