// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "sarsep/geom.hpp"
#include "sarsep/scenesim.hpp"
#include "sarsep/signal.hpp"

namespace sarsep {

struct AnnihilationStage {
  Vec3 rho_e = Vec3::Zero();
  Vec3 u_e = Vec3::Zero();
  int order = 1;
};

struct AnnihilationPlan {
  std::vector<AnnihilationStage> stages;
  void validate() const;
};

// Per-row delays delta_tau(s_j, rho_e + s_j u_e).
std::vector<double> transform_delays(const TraceMatrix& d, const Vec3& rho_e, const Vec3& u_e);

TraceMatrix tt_forward(const TraceMatrix& d, const Vec3& rho_e, const Vec3& u_e = Vec3::Zero(),
                       ShiftReport* report = nullptr);
TraceMatrix tt_inverse(const TraceMatrix& d, const Vec3& rho_e, const Vec3& u_e = Vec3::Zero(),
                       ShiftReport* report = nullptr);

// Order 1: forward difference / ds, valid rows [lo, hi-1).
// Order 2: central second difference / ds^2, valid rows [lo+1, hi-1).
TraceMatrix slow_diff(const TraceMatrix& d, int order);

TraceMatrix annihilate(const TraceMatrix& d, const AnnihilationPlan& plan);

struct AnnihilationFactorReport {
  std::vector<double> s;
  std::vector<double> exact;      // finite differences of travel times
  std::vector<double> leading;    // leading-order closed form
  double stationary_term = 0.0;   // cross-range part, -(2V/c) t.P_e drho / L
  double range_speed_term = 0.0;  // -(2/c) u.m_e
  double remainder_bound = 0.0;   // a u_perp/(cL) + a V R/(cL^2)
  double measured_ratio = -1.0;   // filtered/input energy, when measured
};

AnnihilationFactorReport predict_annihilation_factor(const Trajectory& traj, const Aperture& aperture,
                                                     const Vec3& rho_o, const Target& target,
                                                     const Vec3& rho_e, double imaging_radius = 60.0);

// Energy ratio after one order-1 stage at rho_e applied to the target's own traces.
double measured_annihilation_ratio(const SceneSpec& scene, const Target& target, const Vec3& rho_e);

}  // namespace sarsep
