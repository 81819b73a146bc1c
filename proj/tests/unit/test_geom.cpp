// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "sarsep/geom.hpp"

using namespace sarsep;

TEST_CASE("circular arc starts above the circle and moves at the platform speed") {
  const Trajectory t = GotchaDefaults::trajectory();
  const Vec3 r0 = t.position(0.0);
  CHECK(r0.x() == doctest::Approx(7100.0));
  CHECK(r0.y() == doctest::Approx(0.0));
  CHECK(r0.z() == doctest::Approx(7300.0));
  const double h = 1e-4;
  const double speed = (t.position(0.3 + h) - t.position(0.3 - h)).norm() / (2.0 * h);
  CHECK(speed == doctest::Approx(70.0).epsilon(1e-9));
  CHECK(t.unit_tangent(0.0).dot(Vec3(1, 0, 0)) == doctest::Approx(0.0));
}

TEST_CASE("view frame of the GOTCHA geometry") {
  const ViewFrame f = ViewFrame::make(GotchaDefaults::trajectory(), Vec3::Zero());
  // 7100 / sqrt(7100^2 + 7300^2)
  CHECK(f.b_m.x() == doctest::Approx(0.6972186).epsilon(1e-6));
  CHECK(f.b_m.y() == doctest::Approx(0.0));
  CHECK(f.b_t.y() == doctest::Approx(1.0));
  CHECK(f.range == doctest::Approx(10183.3196).epsilon(1e-8));
}

TEST_CASE("trajectory validation") {
  CHECK_THROWS_AS(Trajectory::linear(Vec3(1e4, 0, 0), Vec3(0, 1, 0), -1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(Trajectory::circular(Vec3::Zero(), 0.0, 7300, 70).validate(), std::invalid_argument);
  Aperture a;
  a.n = 0;
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
}

TEST_CASE("delay bound by the triangle inequality") {
  const Trajectory t = GotchaDefaults::trajectory();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(-60.0, 60.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 rho(pos(rng), pos(rng), 0.0);
    const double s = 0.87 * (pos(rng) / 60.0);
    CHECK(std::abs(delta_tau(t, s, rho, Vec3::Zero())) <= 2.0 * rho.norm() / kSpeedOfLight * (1 + 1e-12));
  }
  CHECK(delta_tau(t, 0.4, Vec3::Zero(), Vec3::Zero()) == 0.0);
}

TEST_CASE("straight 400 m aperture keeps a 5 m offset reflector inside 2*5/c") {
  const Trajectory t = Trajectory::linear(Vec3(10000, 0, 0), Vec3(0, 1, 0), 70.0);
  const double half = 200.0 / 70.0;
  double worst = 0.0;
  for (int j = -200; j <= 200; ++j)
    worst = std::max(worst, std::abs(delta_tau(t, half * j / 200.0, Vec3(0, 5, 0), Vec3::Zero())));
  CHECK(worst <= 2.0 * 5.0 / kSpeedOfLight);
  CHECK(worst > 0.0);
}

TEST_CASE("velocity decomposition round trip") {
  const ViewFrame f = ViewFrame::make(GotchaDefaults::trajectory(), Vec3::Zero());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> v(-28.0, 28.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 u(v(rng), v(rng), 0.0);
    const RangeCrossRange rc = decompose_velocity(f, u);
    const Vec3 back = compose_velocity(f, rc.u, rc.u_perp);
    CHECK((back - u).norm() <= 1e-10 * (1.0 + u.norm()));
    CHECK(Vec2(back.x(), back.y()).dot(f.b_m) == doctest::Approx(rc.u).epsilon(1e-12));
  }
  CHECK_THROWS_AS(decompose_velocity(f, Vec3(1, 0, 1)), std::invalid_argument);
  // 28/sqrt(2) (1,1,0): range speed b_m.x * 28/sqrt(2), cross-range 28/sqrt(2)
  const RangeCrossRange rc = decompose_velocity(f, Vec3(19.798989873223330, 19.798989873223330, 0));
  CHECK(rc.u == doctest::Approx(13.8042241938).epsilon(1e-9));
  CHECK(rc.u_perp == doctest::Approx(19.7989898732).epsilon(1e-9));
}

TEST_CASE("range velocity has the requested range component") {
  const ViewFrame f = ViewFrame::make(GotchaDefaults::trajectory(), Vec3::Zero());
  const Vec3 u = range_velocity(f, 3.0);
  CHECK(decompose_velocity(f, u).u == doctest::Approx(3.0));
  CHECK(u.z() == 0.0);
}

TEST_CASE("residual delay slope vanishes for a stationary target at the filter location") {
  const Trajectory t = GotchaDefaults::trajectory();
  const Vec3 rho(3, -4, 0);
  CHECK(std::abs(residual_delay_slope(t, 0.2, rho, Vec3::Zero(), rho)) < 1e-18);
  CHECK(std::abs(residual_delay_slope(t, 0.2, rho, Vec3(1, 0, 0), rho)) > 1e-9);
}
