// SPDX-License-Identifier: Apache-2.0
#include "sarsep/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sarsep/annihil.hpp"
#include "sarsep/imaging.hpp"

namespace sarsep {

namespace {

WindowLayout layout_for(const TraceMatrix& d, int length) {
  WindowLayout w;
  w.length = std::min(length, d.cols());
  w.overlap = w.length / 8;
  w.validate(d.cols());
  return w;
}

// Mover trace with the given estimate, isolated from d by one straightened PCP pass.
TraceMatrix isolate(const TraceMatrix& d, const Vec3& rho_e, const Vec3& u_vec, const WindowLayout& layout,
                    const PcpOptions& pcp) {
  const TraceMatrix straight = tt_forward(d, rho_e, u_vec);
  return tt_inverse(separate_windowed(straight, layout, pcp).stationary, rho_e, u_vec);
}

double image_peak(const TraceMatrix& d, const ImageGrid& grid, const PulseSpec& pulse, const Vec3& u_vec) {
  const SarImage img = image_compensated(d, grid, pulse, u_vec);
  return img.envelope.size() ? img.envelope.maxCoeff() : 0.0;
}

ImageGrid search_grid(const TraceMatrix& d, const PulseSpec& pulse, const MoverPipelineOptions& opt) {
  return default_grid(d, pulse, d.rho_o, opt.scene_extent, opt.scene_extent);
}

}  // namespace

TraceMatrix readmit(const TraceMatrix& sparse, const TraceMatrix* low, const MotionEstimate& est,
                    const PulseSpec& pulse, double widths) {
  TraceMatrix out = sparse;
  if (!low || widths <= 0.0) return out;
  if (low->rows() != sparse.rows() || low->cols() != sparse.cols())
    throw std::invalid_argument("low-rank and sparse parts differ in shape");
  const double half = widths / pulse.bandwidth;
  RowMat mask = RowMat::Zero(sparse.rows(), sparse.cols());
  for (std::size_t i = 0; i < est.rho_e.size(); ++i) {
    const double center = straightened_peak_time(sparse, est.rho_e[i], est.focus_velocity[i]);
    const std::vector<double> delay = transform_delays(sparse, est.rho_e[i], est.focus_velocity[i]);
    for (int j = sparse.row_lo; j < sparse.row_hi; ++j)
      for (int l = 0; l < sparse.cols(); ++l)
        if (std::abs(sparse.fast.t(l) - center - delay[j]) < half) mask(j, l) = 1.0;
  }
  out.values += low->values.cwiseProduct(mask);
  return out;
}

MotionEstimate estimate_motion(const TraceMatrix& sparse, const TraceMatrix* low, const PulseSpec& pulse,
                               const MoverPipelineOptions& opt, const Vec3* fixed_location) {
  if (opt.movers < 1) throw std::invalid_argument("mover count must be positive");
  sparse.check_consistent();
  const ViewFrame frame = ViewFrame::make(sparse.traj, sparse.rho_o);
  MotionEstimate out;
  out.range_grid = opt.range_grid.points();
  RangeSpeedOptions rs;
  rs.prominence = opt.prominence;
  rs.max_peaks = opt.movers;
  out.peaks = estimate_range_speed(sparse, sparse.rho_o, opt.range_grid, rs, &out.g_sparse);
  const int k = static_cast<int>(out.peaks.size());
  if (k == 0) return out;

  const ImageGrid search = search_grid(sparse, pulse, opt);
  for (int i = 0; i < k; ++i) {
    ImageGrid strip = search;
    if (fixed_location) {
      strip.center = *fixed_location;
    } else {
      const LocationEstimate loc = estimate_location(sparse, range_velocity(frame, out.peaks[i].u), search, pulse);
      strip.center = Vec3(loc.rho.x(), search.center.y(), 0.0);
    }
    strip.extent_x = opt.strip_width;
    const FocusSearch fs = focus_search(sparse, out.peaks[i].u, strip, opt.focus_grid, pulse);
    out.rho_e.push_back(fixed_location ? *fixed_location : fs.location.rho);
    out.focus_velocity.push_back(compose_velocity(frame, out.peaks[i].u, fs.u_perp));
  }

  const TraceMatrix movers_in = readmit(sparse, low, out, pulse, opt.readmit_widths);
  const WindowLayout layout2 = layout_for(sparse, opt.stage2_window);
  std::vector<TraceMatrix> coarse(k);
  for (int i = 0; i < k; ++i) coarse[i] = isolate(movers_in, out.rho_e[i], out.focus_velocity[i], layout2, opt.pcp);

  CrossRangeOptions cr;
  cr.band_halfwidth = opt.band_halfwidth;
  for (int i = 0; i < k; ++i) {
    TraceMatrix others = sparse;
    for (int q = 0; q < k; ++q)
      if (q != i) others.values -= coarse[q].values;
    VelocityEstimate e = estimate_cross_range_speed(opt.cross_on_isolate ? coarse[i] : others, out.rho_e[i],
                                                    out.peaks[i].u, opt.cross_grid, cr);
    e.g_grid = out.range_grid;
    e.g_curve = out.g_sparse;
    out.curvature.push_back(std::move(e));
  }
  return out;
}

std::vector<MoverReport> separate_estimated(const TraceMatrix& sparse, const TraceMatrix* low,
                                            const MotionEstimate& est, const PulseSpec& pulse,
                                            const MoverPipelineOptions& opt, TraceMatrix* residual) {
  const int k = static_cast<int>(est.curvature.size());
  if (k == 0) throw std::invalid_argument("no mover estimates to separate");
  if (static_cast<int>(est.focus_velocity.size()) != k || static_cast<int>(est.rho_e.size()) != k)
    throw std::invalid_argument("inconsistent mover estimates");
  const ViewFrame frame = ViewFrame::make(sparse.traj, sparse.rho_o);
  const TraceMatrix movers_in = readmit(sparse, low, est, pulse, opt.readmit_widths);

  std::vector<VelocityEstimate> used = est.curvature;
  if (opt.separate_with_focus)
    for (int i = 0; i < k; ++i) {
      used[i].u_vec = est.focus_velocity[i];
      used[i].u_perp = decompose_velocity(frame, est.focus_velocity[i]).u_perp;
    }
  const MoverSeparation sep = separate_movers(movers_in, used, layout_for(sparse, opt.stage2_window), opt.pcp);
  if (residual) *residual = sep.residual;

  const ImageGrid search = search_grid(sparse, pulse, opt);
  const double local = std::max(nominal_resolution(sparse, pulse).cross_range * 8.0, 20.0);
  std::vector<MoverReport> out;
  for (int i = 0; i < k; ++i) {
    MoverReport r;
    r.velocity = est.curvature[i];
    r.used = used[i].u_vec;
    r.focus_u_perp = decompose_velocity(frame, est.focus_velocity[i]).u_perp;
    r.trace = sep.movers[i];
    const ImageGrid near = default_grid(sparse, pulse, est.rho_e[i], local, local);
    r.location = estimate_location(r.trace, r.used, near, pulse);
    r.compensated_peak = image_peak(r.trace, search, pulse, r.used);
    r.uncompensated_peak = image_peak(r.trace, search, pulse, Vec3::Zero());
    out.push_back(std::move(r));
  }
  return out;
}

MoverPipelineResult run_mover_pipeline(const TraceMatrix& data, const PulseSpec& pulse,
                                       const MoverPipelineOptions& opt) {
  if (opt.movers < 1) throw std::invalid_argument("mover count must be positive");
  data.check_consistent();
  MoverPipelineResult out;
  out.stage1 = separate_windowed(data, layout_for(data, opt.stage1_window), opt.stage1_pcp);
  out.range_grid = opt.range_grid.points();
  out.g_full = objective_g_curve(data, data.rho_o, out.range_grid);

  const MotionEstimate est = estimate_motion(out.stage1.moving, &out.stage1.stationary, pulse, opt);
  out.g_sparse = est.g_sparse;
  out.peaks = est.peaks;
  if (est.peaks.empty()) return out;
  out.movers = separate_estimated(out.stage1.moving, &out.stage1.stationary, est, pulse, opt, &out.residual);
  return out;
}

}  // namespace sarsep
