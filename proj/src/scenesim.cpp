// SPDX-License-Identifier: Apache-2.0
#include "sarsep/scenesim.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "sarsep/fft.hpp"

namespace sarsep {

void SceneSpec::validate(std::vector<std::string>* warnings) const {
  traj.validate();
  aperture.validate();
  pulse.validate();
  if (axis.m > 0) axis.validate(pulse);
  const ViewFrame f = frame();
  const double v = traj.platform_speed();
  for (std::size_t q = 0; q < targets.size(); ++q) {
    const Target& t = targets[q];
    if (t.rho.z() != 0.0 || t.u_vec.z() != 0.0)
      throw std::invalid_argument("target " + std::to_string(q) + " is not on the ground plane");
    if (t.u_vec.norm() >= v)
      throw std::invalid_argument("target " + std::to_string(q) + " is faster than the platform");
    if ((t.rho - rho_o).norm() > imaging_radius)
      throw std::invalid_argument("target " + std::to_string(q) + " lies outside the imaging radius");
  }
  if (warnings) {
    if (!pulse.narrowband()) warnings->push_back("bandwidth is not small against the carrier");
    if (imaging_radius > f.range / 20.0) warnings->push_back("imaging radius exceeds range/20");
  }
}

double target_delay(const SceneSpec& scene, const Target& q, int row) {
  const double s = scene.aperture.s(row);
  return delta_tau(scene.traj, s, q.at(s), scene.rho_o);
}

double max_delay(const SceneSpec& scene) {
  double best = 0.0;
  for (const Target& q : scene.targets)
    for (int j = 0; j < scene.aperture.rows(); ++j) best = std::max(best, std::abs(target_delay(scene, q, j)));
  return best;
}

FastTimeAxis design_gate(const SceneSpec& scene, double dt, double pad_widths) {
  const double half = max_delay(scene) + pad_widths / scene.pulse.bandwidth;
  FastTimeAxis a;
  a.dt = dt;
  a.m = smooth_gate_length(static_cast<int>(std::ceil(2.0 * half / dt)));
  a.t_center = 0.0;
  return a;
}

namespace {

void accumulate_pulse(const PulseSpec& p, const FastTimeAxis& axis, double delay, double sigma,
                      double* row) {
  const double reach = kPulseSupport / p.bandwidth;
  const double pos = (delay - axis.t_center) / axis.dt + axis.m / 2;
  const int lo = std::max(0, static_cast<int>(std::floor(pos - reach / axis.dt)));
  const int hi = std::min(axis.m, static_cast<int>(std::ceil(pos + reach / axis.dt)));
  for (int l = lo; l <= hi; ++l) row[l] += sigma * pulse_eval(p, axis.t(l) - delay);
}

void check_inside(const FastTimeAxis& axis, double delay, int q, double s) {
  const double offset = delay - axis.t_center;
  if (std::abs(offset) > axis.half_width()) {
    std::ostringstream os;
    os << "target " << q << " leaves the fast-time gate at s = " << s << " s";
    throw GateError(q, s, os.str());
  }
}

}  // namespace

TraceMatrix simulate_targets(const SceneSpec& scene, const std::vector<Target>& targets) {
  TraceMatrix d = TraceMatrix::zeros(scene.aperture, scene.axis, scene.traj, scene.rho_o,
                                     Provenance::range_compressed);
  const int rows = scene.aperture.rows();
  for (std::size_t q = 0; q < targets.size(); ++q)
    for (int j = 0; j < rows; ++j)
      check_inside(scene.axis, target_delay(scene, targets[q], j), static_cast<int>(q), scene.aperture.s(j));
#pragma omp parallel for schedule(static)
  for (int j = 0; j < rows; ++j) {
    double* row = d.values.row(j).data();
    for (const Target& q : targets)
      accumulate_pulse(scene.pulse, scene.axis, target_delay(scene, q, j), q.sigma, row);
  }
  return d;
}

TraceMatrix simulate_traces(const SceneSpec& scene) { return simulate_targets(scene, scene.targets); }

std::pair<TraceMatrix, TraceMatrix> simulate_split(const SceneSpec& scene) {
  std::vector<Target> still, moving;
  for (const Target& q : scene.targets) (q.moving() ? moving : still).push_back(q);
  return {simulate_targets(scene, still), simulate_targets(scene, moving)};
}

FastTimeAxis design_raw_gate(const SceneSpec& scene, double dt, double pad_widths) {
  double lo = 1e300, hi = -1e300;
  for (const Target& q : scene.targets)
    for (int j = 0; j < scene.aperture.rows(); ++j) {
      const double s = scene.aperture.s(j);
      const double tau = travel_time(scene.traj, s, q.at(s));
      lo = std::min(lo, tau);
      hi = std::max(hi, tau);
    }
  if (scene.targets.empty()) lo = hi = travel_time(scene.traj, 0.0, scene.rho_o);
  const double pad = pad_widths / scene.pulse.bandwidth;
  FastTimeAxis a;
  a.dt = dt;
  a.m = smooth_gate_length(static_cast<int>(std::ceil((hi - lo + 2.0 * pad) / dt)));
  a.t_center = 0.5 * (lo + hi);
  return a;
}

TraceMatrix simulate_raw(const SceneSpec& scene, const FastTimeAxis& raw_axis) {
  TraceMatrix d = TraceMatrix::zeros(scene.aperture, raw_axis, scene.traj, scene.rho_o, Provenance::raw);
  const int rows = scene.aperture.rows();
  for (std::size_t q = 0; q < scene.targets.size(); ++q)
    for (int j = 0; j < rows; ++j) {
      const double s = scene.aperture.s(j);
      check_inside(raw_axis, travel_time(scene.traj, s, scene.targets[q].at(s)), static_cast<int>(q), s);
    }
#pragma omp parallel for schedule(static)
  for (int j = 0; j < rows; ++j) {
    const double s = scene.aperture.s(j);
    double* row = d.values.row(j).data();
    for (const Target& q : scene.targets)
      accumulate_pulse(scene.pulse, raw_axis, travel_time(scene.traj, s, q.at(s)), q.sigma, row);
  }
  return d;
}

RowMat support_mask(const SceneSpec& scene, const std::vector<Target>& targets, double halfwidth) {
  RowMat mask = RowMat::Zero(scene.aperture.rows(), scene.axis.cols());
  for (int j = 0; j < scene.aperture.rows(); ++j)
    for (const Target& q : targets) {
      const double delay = target_delay(scene, q, j);
      for (int l = 0; l < scene.axis.cols(); ++l)
        if (std::abs(scene.axis.t(l) - delay) < halfwidth) mask(j, l) = 1.0;
    }
  return mask;
}

std::vector<Target> random_stationary(int count, double half_extent, std::uint64_t seed, const Vec3& center) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-half_extent, half_extent);
  std::vector<Target> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Target t;
    const double x = pos(rng);
    const double y = pos(rng);
    t.rho = center + Vec3(x, y, 0.0);
    out.push_back(t);
  }
  return out;
}

}  // namespace sarsep
