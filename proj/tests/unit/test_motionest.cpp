// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "helpers.hpp"
#include "sarsep/motionest.hpp"

using namespace sarsep;
using namespace testutil;

TEST_CASE("speed grid") {
  const SpeedGrid g{-1.0, 1.0, 0.5};
  CHECK(g.points().size() == 5);
  CHECK_THROWS_AS((SpeedGrid{1.0, 0.0, 0.5}.points()), std::invalid_argument);
  CHECK_THROWS_AS((SpeedGrid{0.0, 1.0, 0.0}.points()), std::invalid_argument);
}

TEST_CASE("stationary scene peaks at zero range speed") {
  const SceneSpec s = gotcha_with({still(0, 0), still(4, 3), still(-3, -6)});
  const TraceMatrix d = simulate_traces(s);
  std::vector<double> curve;
  const auto peaks = estimate_range_speed(d, Vec3::Zero(), SpeedGrid{-10, 10, 0.25}, {}, &curve);
  REQUIRE(!peaks.empty());
  CHECK(std::abs(peaks[0].u) <= 0.125);
}

TEST_CASE("single mover range speed is recovered within half a grid step") {
  for (const Vec3 u : {Vec3(6, 2, 0), Vec3(-4, 7, 0)}) {
    const SceneSpec s = gotcha_with({mover(0, 0, u.x(), u.y())}, 20.0);
    const TraceMatrix d = simulate_traces(s);
    const double truth = decompose_velocity(s.frame(), u).u;
    const auto peaks = estimate_range_speed(d, Vec3::Zero(), SpeedGrid{-20, 20, 0.25});
    REQUIRE(!peaks.empty());
    CHECK(std::abs(peaks[0].u - truth) <= 0.125);
  }
}

TEST_CASE("curvature objective is smallest near the true cross-range speed") {
  const SceneSpec s = gotcha_with({mover(0, 0, 8, 6)}, 20.0);
  const TraceMatrix d = simulate_traces(s);
  const auto truth = decompose_velocity(s.frame(), s.targets[0].u_vec);
  const VelocityEstimate est = estimate_cross_range_speed(d, Vec3::Zero(), truth.u, SpeedGrid{-20, 20, 0.5});
  CHECK(std::abs(est.u_perp - truth.u_perp) <= 0.5);
  CHECK(objective_g_perp(d, Vec3::Zero(), truth.u, truth.u_perp) <
        objective_g_perp(d, Vec3::Zero(), truth.u, truth.u_perp + 5.0));
}

TEST_CASE("objectives are positively homogeneous") {
  const SceneSpec s = gotcha_with({mover(1, 0, 3, 3)}, 10.0);
  TraceMatrix d = simulate_traces(s);
  const double g1 = objective_g(d, Vec3::Zero(), 2.0);
  const double p1 = objective_g_perp(d, Vec3::Zero(), 2.0, 1.0);
  d.values *= 3.0;
  CHECK(objective_g(d, Vec3::Zero(), 2.0) == doctest::Approx(3.0 * g1).epsilon(1e-12));
  CHECK(objective_g_perp(d, Vec3::Zero(), 2.0, 1.0) == doctest::Approx(3.0 * p1).epsilon(1e-12));
}

TEST_CASE("mover separation conserves the input") {
  const SceneSpec s = gotcha_with({still(2, 2), mover(0, 0, 6, 4)}, 10.0);
  const TraceMatrix d = simulate_traces(s);
  VelocityEstimate est;
  est.u_vec = s.targets[1].u_vec;
  const MoverSeparation sep = separate_movers(d, {est}, choose_window(d, s.pulse));
  RowMat sum = sep.residual.values;
  for (const auto& m : sep.movers) sum += m.values;
  CHECK(rel_error(sum, d.values) <= 1e-6);
  CHECK_THROWS_AS(separate_movers(d, {}, choose_window(d, s.pulse)), std::invalid_argument);
}

TEST_CASE("parabolic refinement") {
  const std::vector<double> xs{0, 1, 2}, v{1, 3, 2};
  const double x = parabolic_vertex(xs, v, 1);
  CHECK(x > 1.0);
  CHECK(x < 1.5);
  CHECK(parabolic_vertex(xs, v, 0) == 0.0);
}
