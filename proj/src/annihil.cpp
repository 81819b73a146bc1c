// SPDX-License-Identifier: Apache-2.0
#include "sarsep/annihil.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sarsep {

void AnnihilationPlan::validate() const {
  if (stages.empty()) throw std::invalid_argument("annihilation plan has no stages");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto& st = stages[i];
    if (st.order != 1 && st.order != 2)
      throw std::invalid_argument("stage " + std::to_string(i) + ": difference order must be 1 or 2");
    if (st.u_e.z() != 0.0 || st.rho_e.z() != 0.0)
      throw std::invalid_argument("stage " + std::to_string(i) + ": location and velocity must be horizontal");
  }
}

std::vector<double> transform_delays(const TraceMatrix& d, const Vec3& rho_e, const Vec3& u_e) {
  std::vector<double> out(d.rows());
  for (int j = 0; j < d.rows(); ++j) {
    const double s = d.s(j);
    out[j] = delta_tau(d.traj, s, rho_e + s * u_e, d.rho_o);
  }
  return out;
}

TraceMatrix tt_forward(const TraceMatrix& d, const Vec3& rho_e, const Vec3& u_e, ShiftReport* report) {
  TraceMatrix out = fast_time_shift(d, transform_delays(d, rho_e, u_e), report);
  out.tag = Provenance::transformed;
  return out;
}

TraceMatrix tt_inverse(const TraceMatrix& d, const Vec3& rho_e, const Vec3& u_e, ShiftReport* report) {
  std::vector<double> shift = transform_delays(d, rho_e, u_e);
  for (double& v : shift) v = -v;
  TraceMatrix out = fast_time_shift(d, shift, report);
  out.tag = Provenance::range_compressed;
  return out;
}

TraceMatrix slow_diff(const TraceMatrix& d, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("difference order must be 1 or 2");
  const int valid = d.row_hi - d.row_lo;
  if (valid - 1 < order) throw std::invalid_argument("too few slow-time samples for the difference order");
  TraceMatrix out = d.like(Provenance::filtered);
  const double ds = d.slow.ds;
  if (order == 1) {
    out.row_lo = d.row_lo;
    out.row_hi = d.row_hi - 1;
    for (int j = out.row_lo; j < out.row_hi; ++j)
      out.values.row(j) = (d.values.row(j + 1) - d.values.row(j)) / ds;
  } else {
    out.row_lo = d.row_lo + 1;
    out.row_hi = d.row_hi - 1;
    for (int j = out.row_lo; j < out.row_hi; ++j)
      out.values.row(j) = (d.values.row(j + 1) - 2.0 * d.values.row(j) + d.values.row(j - 1)) / (ds * ds);
  }
  return out;
}

TraceMatrix annihilate(const TraceMatrix& d, const AnnihilationPlan& plan) {
  plan.validate();
  TraceMatrix cur = d;
  for (std::size_t i = 0; i < plan.stages.size(); ++i) {
    const auto& st = plan.stages[i];
    try {
      cur = tt_inverse(slow_diff(tt_forward(cur, st.rho_e, st.u_e), st.order), st.rho_e, st.u_e);
    } catch (const std::exception& e) {
      throw std::runtime_error("annihilation stage " + std::to_string(i) + ": " + e.what());
    }
  }
  cur.tag = Provenance::filtered;
  return cur;
}

AnnihilationFactorReport predict_annihilation_factor(const Trajectory& traj, const Aperture& aperture,
                                                     const Vec3& rho_o, const Target& target,
                                                     const Vec3& rho_e, double imaging_radius) {
  AnnihilationFactorReport r;
  const ViewFrame fo = ViewFrame::make(traj, rho_o);
  const ViewFrame fe = ViewFrame::make(traj, rho_e);
  const double v = traj.platform_speed();
  const double c = kSpeedOfLight;
  const Vec3 drho = target.rho - rho_e;
  const Vec3& u = target.u_vec;
  const Vec3 t0 = traj.unit_tangent(0.0);
  r.stationary_term = -(2.0 * v / c) * t0.dot(fe.proj * drho) / fe.range;
  r.range_speed_term = -(2.0 / c) * u.dot(fe.m_hat);
  const double u_perp = std::abs(decompose_velocity(fo, u).u_perp);
  const double a = 2.0 * aperture.half_duration() * v;
  r.remainder_bound = a * u_perp / (c * fe.range) + a * v * imaging_radius / (c * fe.range * fe.range);
  for (int j = 0; j < aperture.rows(); ++j) {
    const double s = aperture.s(j);
    r.s.push_back(s);
    r.exact.push_back(residual_delay_slope(traj, s, target.rho, u, rho_e));
    const double lead = (2.0 / c) * (-u.dot(fe.m_hat) - (v * t0 - u).dot(fe.proj * drho) / fe.range -
                                     s * (2.0 * v * t0 - u).dot(fe.proj * u) / fe.range);
    r.leading.push_back(lead);
  }
  return r;
}

double measured_annihilation_ratio(const SceneSpec& scene, const Target& target, const Vec3& rho_e) {
  const TraceMatrix d = simulate_targets(scene, {target});
  AnnihilationPlan plan;
  plan.stages.push_back({rho_e, Vec3::Zero(), 1});
  const TraceMatrix q = annihilate(d, plan);
  // Filtered traces carry a 1/ds scale; compare against the derivative scale of the input.
  return q.energy() * scene.aperture.ds * scene.aperture.ds / d.energy();
}

}  // namespace sarsep
