// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "sarsep/annihil.hpp"

using namespace sarsep;
using namespace testutil;

TEST_CASE("travel-time transform round trip on random scenes") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(-20.0, 20.0), vel(-20.0, 20.0);
  for (int trial = 0; trial < 4; ++trial) {
    const SceneSpec s = gotcha_with({still(pos(rng), pos(rng)), mover(pos(rng), pos(rng), vel(rng), vel(rng))}, 40.0);
    const TraceMatrix d = simulate_traces(s);
    const Vec3 rho_e(pos(rng) / 4, pos(rng) / 4, 0.0);
    const Vec3 u_e(vel(rng) / 4, vel(rng) / 4, 0.0);
    const TraceMatrix back = tt_inverse(tt_forward(d, rho_e, u_e), rho_e, u_e);
    CHECK(rel_error(back.values, d.values) <= 1e-10);
  }
}

TEST_CASE("exact filter location removes a stationary trace") {
  const SceneSpec s = gotcha_with({still(4, -7)}, 10.0);
  const double ratio = measured_annihilation_ratio(s, s.targets[0], s.targets[0].rho);
  CHECK(10.0 * std::log10(ratio) <= -60.0);
}

TEST_CASE("straightened mover trace is vertical") {
  const SceneSpec s = gotcha_with({mover(-5, 5, -8.0829, 11.4310)}, 10.0);
  const TraceMatrix t = tt_forward(simulate_traces(s), s.targets[0].rho, s.targets[0].u_vec);
  const RowMat env = envelope(t.values);
  int lo = t.cols(), hi = -1;
  for (int j = 0; j < t.rows(); ++j) {
    Eigen::Index l;
    env.row(j).maxCoeff(&l);
    lo = std::min(lo, static_cast<int>(l));
    hi = std::max(hi, static_cast<int>(l));
  }
  CHECK(hi - lo <= 1);
}

TEST_CASE("slow-time differences") {
  const SceneSpec s = gotcha_with({still(0, 0)});
  TraceMatrix d = simulate_traces(s);
  for (int j = 0; j < d.rows(); ++j) d.values.row(j).setConstant(3.0 * d.s(j) * d.s(j));
  const TraceMatrix d1 = slow_diff(d, 1);
  CHECK(d1.row_hi == d.row_hi - 1);
  const TraceMatrix d2 = slow_diff(d, 2);
  CHECK(d2.row_lo == d.row_lo + 1);
  CHECK(d2.values(20, 5) == doctest::Approx(6.0).epsilon(1e-9));
  CHECK_THROWS_AS(slow_diff(d, 3), std::invalid_argument);
}

TEST_CASE("annihilation is linear") {
  const SceneSpec s = gotcha_with({still(3, 3), mover(-2, 1, 5, -3)}, 10.0);
  auto [a, b] = simulate_split(s);
  AnnihilationPlan plan;
  plan.stages.push_back({Vec3(1, 2, 0), Vec3::Zero(), 1});
  plan.stages.push_back({Vec3(-2, 1, 0), Vec3(5, -3, 0), 2});
  TraceMatrix sum = a;
  sum.values = 2.0 * a.values - 0.5 * b.values;
  const TraceMatrix lhs = annihilate(sum, plan);
  const RowMat rhs = 2.0 * annihilate(a, plan).values - 0.5 * annihilate(b, plan).values;
  CHECK(rel_error(lhs.values, rhs) < 1e-12);
  CHECK(lhs.tag == Provenance::filtered);
}

TEST_CASE("plan validation") {
  AnnihilationPlan p;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.stages.push_back({Vec3::Zero(), Vec3::Zero(), 4});
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.stages[0].order = 1;
  p.stages[0].u_e = Vec3(0, 0, 1);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("leading-order factor tracks the exact slope for stationary offsets") {
  const Trajectory traj = GotchaDefaults::trajectory();
  const Aperture ap = GotchaDefaults::aperture();
  for (const Vec3 drho : {Vec3(0, 2.5, 0), Vec3(3, -6, 0), Vec3(-7, 7, 0)}) {
    const Vec3 rho_e(1, -1, 0);
    const auto r = predict_annihilation_factor(traj, ap, Vec3::Zero(), still(rho_e.x() + drho.x(), rho_e.y() + drho.y()), rho_e);
    const std::size_t mid = r.s.size() / 2;
    CHECK(r.leading[mid] == doctest::Approx(r.exact[mid]).epsilon(0.05));
    CHECK(r.stationary_term == doctest::Approx(r.leading[mid]).epsilon(1e-12));
  }
}

TEST_CASE("mover at 1 m/s is far above a stationary target 2.5 m off in cross-range") {
  const Trajectory traj = GotchaDefaults::trajectory();
  const Aperture ap = GotchaDefaults::aperture();
  const ViewFrame f = ViewFrame::make(traj, Vec3::Zero());
  Target m;
  m.u_vec = range_velocity(f, 1.0);
  const auto rm = predict_annihilation_factor(traj, ap, Vec3::Zero(), m, Vec3::Zero());
  const auto rs = predict_annihilation_factor(traj, ap, Vec3::Zero(), still(0, 2.5), Vec3::Zero());
  const std::size_t mid = rm.s.size() / 2;
  CHECK(std::abs(rm.exact[mid]) == doctest::Approx(2.0 / kSpeedOfLight).epsilon(0.01));
  // threshold speed where the two factors meet: V * 2.5 / L, about 0.017 m/s here
  CHECK(std::abs(rm.exact[mid] / rs.exact[mid]) > 10.0);
}
