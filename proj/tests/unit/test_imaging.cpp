// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "helpers.hpp"
#include "sarsep/imaging.hpp"

using namespace sarsep;
using namespace testutil;

namespace {

ImageGrid small_grid(const Vec3& c, double ex, double ey) {
  ImageGrid g;
  g.center = c;
  g.extent_x = ex;
  g.extent_y = ey;
  g.spacing_x = 0.1;
  g.spacing_y = 0.25;
  return g;
}

}  // namespace

TEST_CASE("stationary point focuses at its position") {
  const SceneSpec s = gotcha_with({still(3.0, -4.0)});
  const TraceMatrix d = simulate_traces(s);
  const SarImage img = image(d, small_grid(Vec3(3, -4, 0), 6, 20), s.pulse);
  const auto peaks = peak_extract(img, 1, 0.0);
  REQUIRE(peaks.size() == 1);
  CHECK(std::abs(peaks[0].position.x() - 3.0) <= 0.15);
  CHECK(std::abs(peaks[0].position.y() + 4.0) <= 0.6);
}

TEST_CASE("compensated imaging with zero velocity equals plain imaging") {
  const SceneSpec s = gotcha_with({still(1, 1), mover(-2, 2, 3, 1)});
  const TraceMatrix d = simulate_traces(s);
  const ImageGrid g = small_grid(Vec3::Zero(), 8, 10);
  const SarImage a = image(d, g, s.pulse);
  const SarImage b = image_compensated(d, g, s.pulse, Vec3::Zero());
  CHECK((a.raw - b.raw).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.envelope - b.envelope).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("imaging is linear in the traces") {
  const SceneSpec s = gotcha_with({still(1, 1), mover(-2, 2, 3, 1)});
  auto [a, b] = simulate_split(s);
  TraceMatrix sum = a;
  sum.values = 1.5 * a.values + 2.0 * b.values;
  const ImageGrid g = small_grid(Vec3::Zero(), 6, 6);
  const RowMat lhs = image(sum, g, s.pulse).raw;
  const RowMat rhs = 1.5 * image(a, g, s.pulse).raw + 2.0 * image(b, g, s.pulse).raw;
  CHECK(rel_error(lhs, rhs) <= 1e-12);
}

TEST_CASE("velocity compensation focuses a mover") {
  const Target m = mover(-5, 5, -8.0829, 11.4310);
  const SceneSpec s = gotcha_with({m}, 30.0);
  const TraceMatrix d = simulate_traces(s);
  const ImageGrid g = small_grid(m.rho, 20, 60);
  const double on = image_compensated(d, g, s.pulse, m.u_vec).envelope.maxCoeff();
  const double off = image(d, g, s.pulse).envelope.maxCoeff();
  CHECK(on >= 5.0 * off);
  const auto loc = peak_extract(image_compensated(d, g, s.pulse, m.u_vec), 1, 0.0);
  CHECK((loc[0].position - m.rho).head<2>().norm() <= 0.7);
}

TEST_CASE("peak extraction respects separation and ordering") {
  const SceneSpec s = gotcha_with({still(-6, 0, 1.0), still(6, 0, 0.5)});
  const SarImage img = image(simulate_traces(s), small_grid(Vec3::Zero(), 16, 8), s.pulse);
  const auto peaks = peak_extract(img, 2, 3.0);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0].value >= peaks[1].value);
  CHECK(peaks[0].position.x() < 0.0);
  CHECK(peaks[1].position.x() > 0.0);
  CHECK(focus_metric(img) > 0.0);
}

TEST_CASE("grid validation") {
  ImageGrid g;
  g.spacing_x = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = ImageGrid{};
  g.extent_y = -1.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("nominal resolution") {
  const SceneSpec s = gotcha_with({still(0, 0)});
  const Resolution r = nominal_resolution(simulate_traces(s), s.pulse);
  CHECK(r.range > 0.0);
  CHECK(r.cross_range > 0.0);
}
