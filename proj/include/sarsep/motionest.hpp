// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sarsep/fft.hpp"
#include "sarsep/imaging.hpp"
#include "sarsep/rpca.hpp"
#include "sarsep/signal.hpp"

namespace sarsep {

struct SpeedGrid {
  double lo = -70.0;
  double hi = 70.0;
  double step = 0.25;
  std::vector<double> points() const;
  void validate() const;
};

// Cached row spectra for repeated fast-time shifts of the same data.
class ShiftedRows {
 public:
  explicit ShiftedRows(const TraceMatrix& d);
  // Row j advanced by delta seconds, written to out (cols() samples).
  void row(int j, double delta, double* out) const;
  const TraceMatrix& data() const { return *d_; }

 private:
  const TraceMatrix* d_;
  std::vector<std::vector<cplx>> spec_;
};

// max over l of sum_j |[T+ D](s_j, t_l)| with the transform built from the
// in-plane velocity whose range component is u.
double objective_g(const TraceMatrix& d, const Vec3& rho_e, double u);
std::vector<double> objective_g_curve(const TraceMatrix& d, const Vec3& rho_e, const std::vector<double>& us);

struct SpeedPeak {
  double u = 0.0;
  double score = 0.0;
};

struct RangeSpeedOptions {
  double prominence = 3.0;  // peaks must exceed this multiple of the median of g
  bool refine = true;
  int max_peaks = 8;
};

std::vector<SpeedPeak> estimate_range_speed(const TraceMatrix& d, const Vec3& rho_e, const SpeedGrid& grid,
                                            const RangeSpeedOptions& opt = {},
                                            std::vector<double>* curve = nullptr);

// sum_{j,l} |D_s^2 [T+ D](s_j, t_l)| for the velocity (u_e, u_perp); when
// band_halfwidth > 0 only samples within that many seconds of band_center
// enter the sum.
double objective_g_perp(const TraceMatrix& d, const Vec3& rho_e, double u_e, double u_perp,
                        double band_center = 0.0, double band_halfwidth = 0.0);

struct VelocityEstimate {
  double u = 0.0;
  double u_perp = 0.0;
  Vec3 u_vec = Vec3::Zero();
  Vec3 rho_e = Vec3::Zero();
  std::vector<double> g_grid, g_curve;
  std::vector<double> g_perp_grid, g_perp_curve;
};

struct CrossRangeOptions {
  bool refine = true;
  // Restrict the curvature sum to a band around the straightened trace.
  double band_halfwidth = 0.0;
  // Cross-range speed used to locate the band.
  double band_u_perp = 0.0;
};

VelocityEstimate estimate_cross_range_speed(const TraceMatrix& d, const Vec3& rho_e, double u_e,
                                            const SpeedGrid& grid, const CrossRangeOptions& opt = {});

// Fast time at which the trace straightened with (rho_e, u_vec) is strongest.
double straightened_peak_time(const TraceMatrix& d, const Vec3& rho_e, const Vec3& u_vec);

struct MoverSeparation {
  std::vector<TraceMatrix> movers;
  TraceMatrix residual;
  std::vector<SeparationResult> diagnostics;
};

// Straighten, windowed PCP, keep the low-rank part as the mover, un-straighten;
// the sparse part feeds the next estimate.
MoverSeparation separate_movers(const TraceMatrix& d, const std::vector<VelocityEstimate>& estimates,
                                const WindowLayout& layout, const PcpOptions& opt = {});

struct LocationEstimate {
  Vec3 rho = Vec3::Zero();
  double peak = 0.0;
  double contrast = 0.0;  // peak over median envelope
  bool unfocused = false;  // contrast below 3 dB
};

LocationEstimate estimate_location(const TraceMatrix& d, const Vec3& u_vec, const ImageGrid& grid,
                                   const PulseSpec& pulse);

// Cross-range speed that maximizes the compensated image peak over `grid`,
// with the range speed held at u. Location is the peak of the best image.
struct FocusSearch {
  double u_perp = 0.0;
  LocationEstimate location;
  std::vector<double> grid, peaks;
};

FocusSearch focus_search(const TraceMatrix& d, double u, const ImageGrid& grid, const SpeedGrid& cross,
                         const PulseSpec& pulse);

double parabolic_vertex(const std::vector<double>& xs, const std::vector<double>& v, int i);

}  // namespace sarsep
