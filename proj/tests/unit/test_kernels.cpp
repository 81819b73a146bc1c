// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>
#include <vector>

#include "sarsep/kernels.hpp"

using namespace sarsep::kernels;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

double scale_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace

TEST_CASE("scalar phase ramp matches direct evaluation") {
  const std::size_t n = 1000;
  std::vector<cplx> x(n, cplx(1.0, 0.0));
  const double theta = 0.0123456;
  scalar::phase_ramp(x.data(), n, theta);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(x[k] - std::polar(1.0, theta * k)));
  CHECK(worst < 1e-13);
}

TEST_CASE("scalar soft threshold") {
  const double in[5] = {-3.0, -0.5, 0.0, 0.5, 3.0};
  double out[5];
  scalar::soft_threshold(in, out, 5, 1.0);
  CHECK(out[0] == -2.0);
  CHECK(out[1] == 0.0);
  CHECK(out[2] == 0.0);
  CHECK(out[3] == 0.0);
  CHECK(out[4] == 2.0);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available; equivalence skipped");
    return;
  }
  for (std::size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 31ul, 32ul, 33ul, 257ul, 4099ul}) {
    CAPTURE(n);
    const auto a = noise(n, 1 + n), b = noise(n, 2 + n), c = noise(n, 3 + n);

    std::vector<double> o1(n), o2(n);
    scalar::soft_threshold(a.data(), o1.data(), n, 0.4);
    avx2::soft_threshold(a.data(), o2.data(), n, 0.4);
    CHECK(o1 == o2);

    std::vector<double> acc1 = b, acc2 = b;
    scalar::abs_accumulate(acc1.data(), a.data(), n);
    avx2::abs_accumulate(acc2.data(), a.data(), n);
    CHECK(acc1 == acc2);

    const double tol = 1e-13 * (1.0 + scale_of(a) * scale_of(b) / std::max<std::size_t>(n, 1));
    CHECK(std::abs(scalar::dot(a.data(), b.data(), n) - avx2::dot(a.data(), b.data(), n)) <= tol);
    const double s1 = scalar::second_diff_abs_sum(a.data(), b.data(), c.data(), n);
    const double s2 = avx2::second_diff_abs_sum(a.data(), b.data(), c.data(), n);
    CHECK(std::abs(s1 - s2) <= 1e-13 * (1.0 + s1));

    std::vector<cplx> z1(n), z2;
    for (std::size_t k = 0; k < n; ++k) z1[k] = cplx(a[k], b[k]);
    z2 = z1;
    scalar::phase_ramp(z1.data(), n, 0.731);
    avx2::phase_ramp(z2.data(), n, 0.731);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(z1[k] - z2[k]) / (1.0 + std::abs(z1[k])));
    CHECK(worst < 1e-13 + 1e-16 * static_cast<double>(n));
  }
}

TEST_CASE("dispatch can be forced to the reference path") {
  const Isa before = active_isa();
  force_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  CHECK(std::string(isa_name(Isa::scalar)) == "scalar");
  const auto a = noise(100, 9);
  std::vector<double> out(100);
  soft_threshold(a.data(), out.data(), 100, 0.1);
  force_isa(before);
  CHECK(active_isa() == before);
}
