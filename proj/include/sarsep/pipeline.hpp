// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "sarsep/motionest.hpp"
#include "sarsep/rpca.hpp"

namespace sarsep {

struct MoverPipelineOptions {
  int stage1_window = 3700;  // fast-time samples per PCP window on the full data
  int stage2_window = 4936;  // same, on straightened mover data
  int movers = 2;
  SpeedGrid range_grid{-70.0, 70.0, 0.25};
  SpeedGrid cross_grid{-70.0, 70.0, 0.5};
  double band_halfwidth = 12e-9;  // s, around the straightened trace
  double scene_extent = 120.0;    // m, square searched for mover locations
  SpeedGrid focus_grid{-30.0, 30.0, 1.0};
  double strip_width = 8.0;       // m in range, for the cross-range focus search
  double readmit_widths = 2.5;    // pulse widths around each mover track; 0 disables
  double prominence = 3.0;
  bool cross_on_isolate = false;    // curvature search on the coarse isolate instead of the peeled data
  bool separate_with_focus = true;  // straighten with the focus-search velocity, not the curvature minimum
  PcpOptions stage1_pcp = [] {
    PcpOptions p;
    p.eta_scale = 1.4;
    return p;
  }();
  PcpOptions pcp;  // straightened mover windows
};

struct MoverReport {
  VelocityEstimate velocity;  // curvature-based estimate
  Vec3 used = Vec3::Zero();   // velocity used for separation and imaging
  double focus_u_perp = 0.0;
  LocationEstimate location;
  TraceMatrix trace;
  double compensated_peak = 0.0;
  double uncompensated_peak = 0.0;
};

struct MotionEstimate {
  std::vector<double> range_grid;
  std::vector<double> g_sparse;  // g(u) on the sparse part
  std::vector<SpeedPeak> peaks;
  std::vector<VelocityEstimate> curvature;  // cross-range speed from the curvature objective
  std::vector<Vec3> rho_e;                  // one per peak
  std::vector<Vec3> focus_velocity;         // cross-range speed from the focus search
};

// Range-speed peaks, locations and both cross-range estimates from the sparse
// part. `low` (may be null) supplies content readmitted along each track.
// A finite `fixed_location` replaces the image-based location search.
MotionEstimate estimate_motion(const TraceMatrix& sparse, const TraceMatrix* low, const PulseSpec& pulse,
                               const MoverPipelineOptions& opt = {}, const Vec3* fixed_location = nullptr);

// Sparse part plus the readmitted low-rank content along each estimated track.
TraceMatrix readmit(const TraceMatrix& sparse, const TraceMatrix* low, const MotionEstimate& est,
                    const PulseSpec& pulse, double widths);

// Per-mover sub-separation and compensated imaging.
std::vector<MoverReport> separate_estimated(const TraceMatrix& sparse, const TraceMatrix* low,
                                            const MotionEstimate& est, const PulseSpec& pulse,
                                            const MoverPipelineOptions& opt, TraceMatrix* residual = nullptr);

struct MoverPipelineResult {
  SeparationResult stage1;
  std::vector<double> range_grid;
  std::vector<double> g_full;    // g(u) on the input
  std::vector<double> g_sparse;  // g(u) on the sparse part
  std::vector<SpeedPeak> peaks;
  std::vector<MoverReport> movers;
  TraceMatrix residual;
};

// Stationary/moving split, range-speed peaks, mover locations, cross-range
// speeds, then per-mover separation, strongest peak first.
MoverPipelineResult run_mover_pipeline(const TraceMatrix& data, const PulseSpec& pulse,
                                       const MoverPipelineOptions& opt = {});

}  // namespace sarsep
