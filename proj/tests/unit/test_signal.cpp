// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "helpers.hpp"
#include "sarsep/fft.hpp"
#include "sarsep/signal.hpp"

using namespace sarsep;
using testutil::gotcha_with;
using testutil::still;

namespace {

TraceMatrix pulse_rows(int m, double offset) {
  SceneSpec s = GotchaDefaults::scene();
  FastTimeAxis ax;
  ax.m = m;
  ax.dt = 1.0 / (5.0 * s.pulse.nu0());
  TraceMatrix d = TraceMatrix::zeros(s.aperture, ax, s.traj, s.rho_o, Provenance::range_compressed);
  for (int j = 0; j < d.rows(); ++j)
    for (int l = 0; l < d.cols(); ++l) d.values(j, l) = pulse_eval(s.pulse, ax.t(l) - offset);
  return d;
}

}  // namespace

TEST_CASE("smooth gate lengths") {
  for (int m : {1, 10, 97, 1000, 8191, 12000}) {
    const int g = smooth_gate_length(m);
    CHECK(g >= m);
    CHECK(g % 2 == 0);
    int r = g + 1;
    for (int p : {3, 5, 7})
      while (r % p == 0) r /= p;
    CHECK(r == 1);
  }
  CHECK(smooth_gate_length(1000) == 1028);
}

TEST_CASE("integer-sample shift is a circular roll") {
  TraceMatrix d = pulse_rows(404, 0.0);
  d.values = testutil::random_rows(d.rows(), d.cols(), 11);
  const int k = 7;
  std::vector<double> shift(d.rows(), k * d.fast.dt);
  const TraceMatrix out = fast_time_shift(d, shift);
  const int n = d.cols();
  double worst = 0.0;
  for (int j = 0; j < d.rows(); ++j)
    for (int l = 0; l < n; ++l) worst = std::max(worst, std::abs(out.values(j, l) - d.values(j, (l + k) % n)));
  CHECK(worst < 1e-12);
}

TEST_CASE("fractional shift moves a band-limited pulse") {
  const TraceMatrix d = pulse_rows(1214, 0.0);
  const double delta = 0.37e-9;
  std::vector<double> shift(d.rows(), -delta);
  const TraceMatrix out = fast_time_shift(d, shift);
  const TraceMatrix ref = pulse_rows(1214, delta);
  CHECK(rel_error(out.values, ref.values) < 1e-9);
  std::vector<double> back(d.rows(), delta);
  CHECK(rel_error(fast_time_shift(out, back).values, d.values) < 1e-12);
}

TEST_CASE("shift report flags large shifts") {
  const TraceMatrix d = pulse_rows(404, 0.0);
  ShiftReport rep;
  fast_time_shift(d, std::vector<double>(d.rows(), 0.3 * 404 * d.fast.dt), &rep);
  CHECK(rep.wrap_warning);
  fast_time_shift(d, std::vector<double>(d.rows(), 3 * d.fast.dt), &rep);
  CHECK_FALSE(rep.wrap_warning);
  CHECK_THROWS_AS(fast_time_shift(d, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("analytic-signal magnitude of the pulse is its envelope") {
  const TraceMatrix d = pulse_rows(1214, 0.0);
  const RowMat env = envelope(d.values);
  const PulseSpec p;
  double worst = 0.0;
  for (int l = 0; l < d.cols(); ++l)
    worst = std::max(worst, std::abs(env(0, l) - pulse_envelope(p, d.fast.t(l))));
  CHECK(worst < 1e-6);
}

TEST_CASE("range compression aligns a nearby reflector and round-trips") {
  SceneSpec s = gotcha_with({still(0, 5)});
  const FastTimeAxis raw_axis = design_raw_gate(s, s.axis.dt);
  const TraceMatrix raw = simulate_raw(s, raw_axis);
  const TraceMatrix rc = range_compress(raw);
  CHECK(rc.tag == Provenance::range_compressed);
  const RowMat env = envelope(rc.values);
  for (int j = 0; j < rc.rows(); j += 8) {
    Eigen::Index l;
    env.row(j).maxCoeff(&l);
    CHECK(std::abs(rc.fast.t(static_cast<int>(l)) - target_delay(s, s.targets[0], j)) <= rc.fast.dt);
  }
  const TraceMatrix back = range_expand(rc);
  CHECK(rel_error(back.values, raw.values) < 1e-10);
  CHECK(back.fast.t_center == doctest::Approx(raw.fast.t_center).epsilon(1e-15));
  CHECK_THROWS_AS(range_compress(rc), std::invalid_argument);
}

TEST_CASE("provenance names and axis validation") {
  for (Provenance p : {Provenance::raw, Provenance::range_compressed, Provenance::transformed, Provenance::filtered})
    CHECK(provenance_from(provenance_name(p)) == p);
  CHECK_THROWS_AS(provenance_from("cooked"), std::invalid_argument);
  FastTimeAxis ax;
  ax.m = 100;
  ax.dt = 1.0 / 9.6e9;
  CHECK_THROWS_AS(ax.validate(PulseSpec{}), std::invalid_argument);
  ax.dt = 1.0 / 48e9;
  CHECK_NOTHROW(ax.validate(PulseSpec{}));
}

TEST_CASE("correlation and relative error") {
  const RowMat a = testutil::random_rows(4, 9, 1);
  CHECK(correlation(a, 3.0 * a) == doctest::Approx(1.0));
  CHECK(correlation(a, -a) == doctest::Approx(-1.0));
  CHECK(rel_error(a, a) == 0.0);
  CHECK(correlation(a, RowMat::Zero(4, 9)) == 0.0);
}
