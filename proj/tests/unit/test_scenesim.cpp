// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "helpers.hpp"
#include "sarsep/scenesim.hpp"

using namespace sarsep;
using namespace testutil;

TEST_CASE("split simulation sums to the full simulation") {
  for (const char* name : {"scene1", "example2"}) {
    CAPTURE(name);
    const SceneSpec s = load_scene(name);
    const TraceMatrix full = simulate_traces(s);
    auto [st, mv] = simulate_split(s);
    CHECK((st.values + mv.values - full.values).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("mover-only scene has an empty stationary part") {
  const SceneSpec s = gotcha_with({mover(0, 0, 10, 10)});
  auto [st, mv] = simulate_split(s);
  CHECK(st.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(mv.values.cwiseAbs().maxCoeff() > 0.5);
}

TEST_CASE("mover trace slope follows the delay derivative") {
  const SceneSpec s = load_scene("example1");
  const Target q = s.targets.back();
  REQUIRE(q.moving());
  const TraceMatrix d = simulate_targets(s, {q});
  const RowMat env = envelope(d.values);
  std::vector<double> peak(d.rows());
  for (int j = 0; j < d.rows(); ++j) {
    Eigen::Index l;
    env.row(j).maxCoeff(&l);
    peak[j] = d.fast.t(static_cast<int>(l));
  }
  const int j0 = d.rows() / 2;
  const double measured = (peak[j0 + 20] - peak[j0 - 20]) / (d.s(j0 + 20) - d.s(j0 - 20));
  const double expected = (target_delay(s, q, j0 + 20) - target_delay(s, q, j0 - 20)) / (d.s(j0 + 20) - d.s(j0 - 20));
  CHECK(measured == doctest::Approx(expected).epsilon(0.02));
  // the slope is dominated by the range speed: about -2u/c
  const double u = decompose_velocity(s.frame(), q.u_vec).u;
  CHECK(expected == doctest::Approx(-2.0 * u / kSpeedOfLight).epsilon(0.05));
}

TEST_CASE("gate violations are reported with the target and slow time") {
  SceneSpec s = gotcha_with({still(0, 0)});
  s.targets.push_back(still(40, 0));
  try {
    simulate_traces(s);
    FAIL("expected a gate error");
  } catch (const GateError& e) {
    CHECK(e.target_index == 1);
  }
}

TEST_CASE("scene validation") {
  SceneSpec s = GotchaDefaults::scene();
  s.targets = {still(100, 0)};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.targets = {mover(0, 0, 80, 0)};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.targets = {still(0, 0)};
  s.targets[0].rho.z() = 1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.targets = {still(0, 0)};
  std::vector<std::string> warn;
  s.imaging_radius = 600.0;
  s.validate(&warn);
  CHECK(warn.size() == 1);
}

TEST_CASE("random stationary layout is reproducible and bounded") {
  const auto a = random_stationary(50, 25.0, 7);
  const auto b = random_stationary(50, 25.0, 7);
  const auto c = random_stationary(50, 25.0, 8);
  REQUIRE(a.size() == 50);
  bool differs = false;
  for (int i = 0; i < 50; ++i) {
    CHECK(a[i].rho == b[i].rho);
    CHECK(std::abs(a[i].rho.x()) <= 25.0);
    CHECK(std::abs(a[i].rho.y()) <= 25.0);
    differs |= a[i].rho != c[i].rho;
  }
  CHECK(differs);
}

TEST_CASE("support mask covers the trace") {
  const SceneSpec s = gotcha_with({still(2, 3)});
  const RowMat mask = support_mask(s, s.targets, 4.0 / s.pulse.bandwidth);
  const TraceMatrix d = simulate_traces(s);
  const double inside = d.values.cwiseProduct(mask).squaredNorm();
  CHECK(inside / d.values.squaredNorm() > 0.999999);
}
