// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace sarsep {

using cplx = std::complex<double>;

// Real-to-complex transform of fixed length backed by FFTW. Plans are cached
// per length and shared; execution is safe from concurrent threads.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  void forward(const double* in, cplx* out) const;
  // Normalized inverse: inverse(forward(x)) == x.
  void inverse(const cplx* in, double* out) const;

 private:
  std::size_t n_;
  struct Plans;
  std::shared_ptr<Plans> plans_;
};

// Complex-to-complex transform of fixed length, same threading contract.
class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);
  ~ComplexFft();
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  std::size_t size() const { return n_; }
  void forward(const cplx* in, cplx* out) const;
  void inverse(const cplx* in, cplx* out) const;

 private:
  std::size_t n_;
  struct Plans;
  std::shared_ptr<Plans> plans_;
};

// Smallest even m >= m_min such that m + 1 factors into 3, 5 and 7 only.
int smooth_gate_length(int m_min);

}  // namespace sarsep
