// SPDX-License-Identifier: Apache-2.0
#include "sarsep/geom.hpp"

#include <cmath>
#include <stdexcept>

namespace sarsep {

Trajectory Trajectory::linear(const Vec3& r0, const Vec3& t_hat, double v) {
  Trajectory t;
  t.kind = Kind::linear;
  t.origin = r0;
  t.tangent = t_hat.normalized();
  t.speed = v;
  return t;
}

Trajectory Trajectory::circular(const Vec3& center, double radius, double height, double speed,
                                double phase0) {
  Trajectory t;
  t.kind = Kind::circular_arc;
  t.center = center;
  t.radius = radius;
  t.height = height;
  t.angular_rate = speed / radius;
  t.phase0 = phase0;
  t.speed = speed;
  return t;
}

Vec3 Trajectory::position(double s) const {
  if (kind == Kind::linear) return origin + (s * speed) * tangent;
  const double phi = phase0 + angular_rate * s;
  return center + Vec3(radius * std::cos(phi), radius * std::sin(phi), height);
}

Vec3 Trajectory::unit_tangent(double s) const {
  if (kind == Kind::linear) return tangent;
  const double phi = phase0 + angular_rate * s;
  const double sgn = angular_rate >= 0.0 ? 1.0 : -1.0;
  return Vec3(-sgn * std::sin(phi), sgn * std::cos(phi), 0.0);
}

double Trajectory::platform_speed() const {
  return kind == Kind::linear ? speed : std::abs(angular_rate) * radius;
}

void Trajectory::validate() const {
  if (kind == Kind::linear) {
    if (std::abs(tangent.norm() - 1.0) > 1e-12) throw std::invalid_argument("tangent is not a unit vector");
    if (!(speed > 0.0)) throw std::invalid_argument("platform speed must be positive");
  } else {
    if (!(radius > 0.0)) throw std::invalid_argument("arc radius must be positive");
    if (!(std::abs(angular_rate) > 0.0)) throw std::invalid_argument("angular rate must be nonzero");
  }
}

void Aperture::validate() const {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("aperture sample count must be even and >= 2");
  if (!(ds > 0.0)) throw std::invalid_argument("slow-time spacing must be positive");
}

ViewFrame ViewFrame::make(const Trajectory& traj, const Vec3& rho_o) {
  ViewFrame f;
  f.rho_o = rho_o;
  const Vec3 d = traj.position(0.0) - rho_o;
  f.range = d.norm();
  f.m_hat = d / f.range;
  f.proj = Eigen::Matrix3d::Identity() - f.m_hat * f.m_hat.transpose();
  f.t_hat = traj.unit_tangent(0.0);
  f.b_m = f.m_hat.head<2>();
  f.b_t = f.t_hat.head<2>();
  return f;
}

namespace {

// |a| - |b| without cancellation when a and b are close.
double norm_difference(const Vec3& a, const Vec3& b) {
  const double na = a.norm();
  const double nb = b.norm();
  const double sum = na + nb;
  if (sum == 0.0) return 0.0;
  return (a - b).dot(a + b) / sum;
}

}  // namespace

double travel_time(const Trajectory& traj, double s, const Vec3& rho) {
  return 2.0 * (traj.position(s) - rho).norm() / kSpeedOfLight;
}

double delta_tau(const Trajectory& traj, double s, const Vec3& rho, const Vec3& rho_o) {
  const Vec3 r = traj.position(s);
  return 2.0 * norm_difference(r - rho, r - rho_o) / kSpeedOfLight;
}

RangeCrossRange decompose_velocity(const ViewFrame& frame, const Vec3& u_vec) {
  if (u_vec.z() != 0.0) throw std::invalid_argument("target velocity must be horizontal");
  RangeCrossRange out;
  out.u = u_vec.dot(frame.m_hat);
  out.u_perp = frame.t_hat.dot(frame.proj * u_vec);
  return out;
}

Vec3 compose_velocity(const ViewFrame& frame, double u, double u_perp) {
  Eigen::Matrix2d a;
  a.row(0) = frame.b_m.transpose();
  a.row(1) = frame.b_t.transpose();
  const Vec2 rhs(u, u_perp + u * frame.m_hat.dot(frame.t_hat));
  const Vec2 b = a.fullPivLu().solve(rhs);
  return Vec3(b.x(), b.y(), 0.0);
}

Vec3 range_velocity(const ViewFrame& frame, double u) {
  const Vec2 b = frame.b_m * (u / frame.b_m.squaredNorm());
  return Vec3(b.x(), b.y(), 0.0);
}

double residual_delay_slope(const Trajectory& traj, double s, const Vec3& rho, const Vec3& u_vec,
                            const Vec3& rho_e, double h) {
  auto f = [&](double t) {
    const Vec3 r = traj.position(t);
    return 2.0 * norm_difference(r - (rho + t * u_vec), r - rho_e) / kSpeedOfLight;
  };
  return (f(s + h) - f(s - h)) / (2.0 * h);
}

}  // namespace sarsep
