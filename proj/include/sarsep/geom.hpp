// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <utility>

namespace sarsep {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

// Platform path parameterized by slow time s (seconds).
struct Trajectory {
  enum class Kind { linear, circular_arc };
  Kind kind = Kind::linear;

  // linear: r(s) = origin + s * speed * tangent
  Vec3 origin = Vec3::Zero();
  Vec3 tangent = Vec3::UnitY();
  double speed = 70.0;

  // circular arc: r(s) = center + (R cos phi, R sin phi, H), phi = phase0 + rate * s
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  double height = 0.0;
  double angular_rate = 0.0;
  double phase0 = 0.0;

  static Trajectory linear(const Vec3& r0, const Vec3& t_hat, double v);
  static Trajectory circular(const Vec3& center, double radius, double height,
                             double speed, double phase0 = 0.0);

  Vec3 position(double s) const;
  Vec3 unit_tangent(double s) const;
  double platform_speed() const;

  // Throws std::invalid_argument when the invariants fail.
  void validate() const;
};

// Slow-time samples s_j = j * ds for j = -n/2 .. n/2, stored at index j + n/2.
struct Aperture {
  int n = 116;
  double ds = 0.015;

  int rows() const { return n + 1; }
  double s(int row) const { return (row - n / 2) * ds; }
  double half_duration() const { return 0.5 * n * ds; }
  void validate() const;
};

// Line-of-sight frame at the reference point.
struct ViewFrame {
  Vec3 rho_o = Vec3::Zero();
  Vec3 m_hat = Vec3::UnitX();
  Eigen::Matrix3d proj = Eigen::Matrix3d::Identity();
  Vec2 b_m = Vec2::Zero();
  Vec2 b_t = Vec2::Zero();
  Vec3 t_hat = Vec3::UnitY();
  double range = 0.0;

  static ViewFrame make(const Trajectory& traj, const Vec3& rho_o);
};

double travel_time(const Trajectory& traj, double s, const Vec3& rho);
double delta_tau(const Trajectory& traj, double s, const Vec3& rho, const Vec3& rho_o);

struct RangeCrossRange {
  double u = 0.0;
  double u_perp = 0.0;
};

// Throws std::invalid_argument for a velocity with vertical component.
RangeCrossRange decompose_velocity(const ViewFrame& frame, const Vec3& u_vec);

// In-plane velocity with the given range and cross-range speeds.
Vec3 compose_velocity(const ViewFrame& frame, double u, double u_perp);

// In-plane velocity along the ground projection of the line of sight whose
// range component equals u.
Vec3 range_velocity(const ViewFrame& frame, double u);

// Residual-delay slope d/ds [tau(s, rho + s u) - tau(s, rho_e)] by central differences.
double residual_delay_slope(const Trajectory& traj, double s, const Vec3& rho, const Vec3& u_vec,
                            const Vec3& rho_e, double h = 1e-3);

}  // namespace sarsep
