// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sarsep/geom.hpp"
#include "sarsep/signal.hpp"

namespace sarsep {

struct Target {
  Vec3 rho = Vec3::Zero();    // position at s = 0
  Vec3 u_vec = Vec3::Zero();  // constant horizontal velocity
  double sigma = 1.0;

  bool moving() const { return u_vec.squaredNorm() > 0.0; }
  Vec3 at(double s) const { return rho + s * u_vec; }
};

struct SceneSpec {
  std::string name = "scene";
  Trajectory traj;
  Aperture aperture;
  Vec3 rho_o = Vec3::Zero();
  PulseSpec pulse;
  FastTimeAxis axis;
  std::vector<Target> targets;
  double imaging_radius = 60.0;
  std::uint64_t seed = 0;

  ViewFrame frame() const { return ViewFrame::make(traj, rho_o); }
  // Throws std::invalid_argument; appends soft warnings to *warnings.
  void validate(std::vector<std::string>* warnings = nullptr) const;
};

class GateError : public std::runtime_error {
 public:
  GateError(int target, double s, const std::string& what)
      : std::runtime_error(what), target_index(target), slow_time(s) {}
  int target_index;
  double slow_time;
};

// Delay of target q on row j relative to the reference point.
double target_delay(const SceneSpec& scene, const Target& q, int row);

// Largest |delta tau| over targets and slow time.
double max_delay(const SceneSpec& scene);

// Gate for the scene: delay spread plus `pad_widths`/B on each side, sample
// count rounded up to a fast FFT length.
FastTimeAxis design_gate(const SceneSpec& scene, double dt, double pad_widths = 6.0);

TraceMatrix simulate_traces(const SceneSpec& scene);
// Sum of the two outputs equals simulate_traces(scene).
std::pair<TraceMatrix, TraceMatrix> simulate_split(const SceneSpec& scene);
TraceMatrix simulate_targets(const SceneSpec& scene, const std::vector<Target>& targets);

// Traces before range compression, on an absolute fast-time axis.
TraceMatrix simulate_raw(const SceneSpec& scene, const FastTimeAxis& raw_axis);
FastTimeAxis design_raw_gate(const SceneSpec& scene, double dt, double pad_widths = 6.0);

// 1 where some listed target's delay is within halfwidth of t_l, else 0.
RowMat support_mask(const SceneSpec& scene, const std::vector<Target>& targets, double halfwidth);

// count positions uniform in a square of side 2*half_extent around center.
std::vector<Target> random_stationary(int count, double half_extent, std::uint64_t seed,
                                      const Vec3& center = Vec3::Zero());

}  // namespace sarsep
