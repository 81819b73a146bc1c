// SPDX-License-Identifier: Apache-2.0
#include "sarsep/motionest.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "sarsep/annihil.hpp"
#include "sarsep/fft.hpp"
#include "sarsep/kernels.hpp"

namespace sarsep {

std::vector<double> SpeedGrid::points() const {
  validate();
  std::vector<double> out;
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) out.push_back(lo + i * step);
  return out;
}

void SpeedGrid::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(hi >= lo)) throw std::invalid_argument("grid upper bound below lower bound");
}

namespace {

std::shared_ptr<RealFft> fft_for(int n) { return std::make_shared<RealFft>(n); }

}  // namespace

ShiftedRows::ShiftedRows(const TraceMatrix& d) : d_(&d), spec_(d.rows()) {
  RealFft fft(d.cols());
#pragma omp parallel for schedule(static)
  for (int j = d.row_lo; j < d.row_hi; ++j) {
    spec_[j].resize(fft.bins());
    fft.forward(d.values.row(j).data(), spec_[j].data());
  }
}

void ShiftedRows::row(int j, double delta, double* out) const {
  thread_local std::vector<cplx> buf;
  thread_local std::shared_ptr<RealFft> fft;
  const int n = d_->cols();
  if (!fft || static_cast<int>(fft->size()) != n) fft = fft_for(n);
  buf = spec_[j];
  kernels::phase_ramp(buf.data(), buf.size(), 2.0 * kPi * delta / (n * d_->fast.dt));
  fft->inverse(buf.data(), out);
}

namespace {

double g_value(const ShiftedRows& rows, const ViewFrame& frame, const Vec3& rho_e, double u,
               std::vector<double>& acc, std::vector<double>& tmp) {
  const TraceMatrix& d = rows.data();
  const Vec3 u_vec = range_velocity(frame, u);
  std::fill(acc.begin(), acc.end(), 0.0);
  for (int j = d.row_lo; j < d.row_hi; ++j) {
    const double s = d.s(j);
    rows.row(j, delta_tau(d.traj, s, rho_e + s * u_vec, d.rho_o), tmp.data());
    kernels::abs_accumulate(acc.data(), tmp.data(), acc.size());
  }
  return *std::max_element(acc.begin(), acc.end());
}

}  // namespace

std::vector<double> objective_g_curve(const TraceMatrix& d, const Vec3& rho_e, const std::vector<double>& us) {
  const ShiftedRows rows(d);
  const ViewFrame frame = ViewFrame::make(d.traj, d.rho_o);
  std::vector<double> out(us.size());
#pragma omp parallel
  {
    std::vector<double> acc(d.cols()), tmp(d.cols());
#pragma omp for schedule(dynamic, 1)
    for (int i = 0; i < static_cast<int>(us.size()); ++i) out[i] = g_value(rows, frame, rho_e, us[i], acc, tmp);
  }
  return out;
}

double objective_g(const TraceMatrix& d, const Vec3& rho_e, double u) {
  return objective_g_curve(d, rho_e, {u})[0];
}

double parabolic_vertex(const std::vector<double>& xs, const std::vector<double>& v, int i) {
  if (i <= 0 || i + 1 >= static_cast<int>(xs.size())) return xs[i];
  const double a = v[i - 1], b = v[i], c = v[i + 1];
  const double den = a - 2.0 * b + c;
  if (den == 0.0) return xs[i];
  const double off = 0.5 * (a - c) / den;
  return xs[i] + std::clamp(off, -0.5, 0.5) * (xs[i + 1] - xs[i]);
}

std::vector<SpeedPeak> estimate_range_speed(const TraceMatrix& d, const Vec3& rho_e, const SpeedGrid& grid,
                                            const RangeSpeedOptions& opt, std::vector<double>* curve) {
  const std::vector<double> us = grid.points();
  const std::vector<double> g = objective_g_curve(d, rho_e, us);
  if (curve) *curve = g;
  std::vector<double> sorted = g;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double floor = opt.prominence * sorted[sorted.size() / 2];
  std::vector<SpeedPeak> peaks;
  const int n = static_cast<int>(g.size());
  for (int i = 0; i < n; ++i) {
    const bool left = i == 0 || g[i] >= g[i - 1];
    const bool right = i == n - 1 || g[i] > g[i + 1];
    if (!(left && right) || !(g[i] > floor)) continue;
    peaks.push_back({opt.refine ? parabolic_vertex(us, g, i) : us[i], g[i]});
  }
  std::sort(peaks.begin(), peaks.end(), [](const SpeedPeak& a, const SpeedPeak& b) { return a.score > b.score; });
  if (static_cast<int>(peaks.size()) > opt.max_peaks) peaks.resize(opt.max_peaks);
  return peaks;
}

namespace {

double g_perp_value(const ShiftedRows& rows, const ViewFrame& frame, const Vec3& rho_e, double u_e,
                    double u_perp, int lo, int hi) {
  const TraceMatrix& d = rows.data();
  const Vec3 u_vec = compose_velocity(frame, u_e, u_perp);
  const int w = hi - lo;
  const int n = d.cols();
  std::vector<double> r0(n), r1(n), r2(n);
  auto load = [&](int j, std::vector<double>& out) {
    const double s = d.s(j);
    rows.row(j, delta_tau(d.traj, s, rho_e + s * u_vec, d.rho_o), out.data());
  };
  if (d.row_hi - d.row_lo < 3) return 0.0;
  load(d.row_lo, r0);
  load(d.row_lo + 1, r1);
  double total = 0.0;
  for (int j = d.row_lo + 1; j + 1 < d.row_hi; ++j) {
    load(j + 1, r2);
    total += kernels::second_diff_abs_sum(r0.data() + lo, r1.data() + lo, r2.data() + lo, w);
    std::swap(r0, r1);
    std::swap(r1, r2);
  }
  return total / (d.slow.ds * d.slow.ds);
}

void band_limits(const TraceMatrix& d, double center, double halfwidth, int* lo, int* hi) {
  if (halfwidth <= 0.0) {
    *lo = 0;
    *hi = d.cols();
    return;
  }
  const double pos = (center - d.fast.t_center) / d.fast.dt + d.fast.m / 2;
  const double hw = halfwidth / d.fast.dt;
  *lo = std::max(0, static_cast<int>(std::floor(pos - hw)));
  *hi = std::min(d.cols(), static_cast<int>(std::ceil(pos + hw)) + 1);
}

}  // namespace

double objective_g_perp(const TraceMatrix& d, const Vec3& rho_e, double u_e, double u_perp, double band_center,
                        double band_halfwidth) {
  const ShiftedRows rows(d);
  int lo, hi;
  band_limits(d, band_center, band_halfwidth, &lo, &hi);
  return g_perp_value(rows, ViewFrame::make(d.traj, d.rho_o), rho_e, u_e, u_perp, lo, hi);
}

double straightened_peak_time(const TraceMatrix& d, const Vec3& rho_e, const Vec3& u_vec) {
  const TraceMatrix t = tt_forward(d, rho_e, u_vec);
  std::vector<double> acc(d.cols(), 0.0);
  for (int j = t.row_lo; j < t.row_hi; ++j) kernels::abs_accumulate(acc.data(), t.values.row(j).data(), acc.size());
  const int l = static_cast<int>(std::max_element(acc.begin(), acc.end()) - acc.begin());
  return d.fast.t(l);
}

VelocityEstimate estimate_cross_range_speed(const TraceMatrix& d, const Vec3& rho_e, double u_e,
                                            const SpeedGrid& grid, const CrossRangeOptions& opt) {
  const ViewFrame frame = ViewFrame::make(d.traj, d.rho_o);
  VelocityEstimate est;
  est.u = u_e;
  est.rho_e = rho_e;
  int lo = 0, hi = d.cols();
  if (opt.band_halfwidth > 0.0) {
    const double center = straightened_peak_time(d, rho_e, compose_velocity(frame, u_e, opt.band_u_perp));
    band_limits(d, center, opt.band_halfwidth, &lo, &hi);
  }
  const ShiftedRows rows(d);
  est.g_perp_grid = grid.points();
  est.g_perp_curve.assign(est.g_perp_grid.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < static_cast<int>(est.g_perp_grid.size()); ++i)
    est.g_perp_curve[i] = g_perp_value(rows, frame, rho_e, u_e, est.g_perp_grid[i], lo, hi);
  const auto& v = est.g_perp_curve;
  const int best = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
  est.u_perp = opt.refine ? parabolic_vertex(est.g_perp_grid, v, best) : est.g_perp_grid[best];
  est.u_vec = compose_velocity(frame, est.u, est.u_perp);
  return est;
}

MoverSeparation separate_movers(const TraceMatrix& d, const std::vector<VelocityEstimate>& estimates,
                                const WindowLayout& layout, const PcpOptions& opt) {
  if (estimates.empty()) throw std::invalid_argument("at least one velocity estimate is required");
  MoverSeparation out;
  TraceMatrix src = d;
  for (const VelocityEstimate& est : estimates) {
    const TraceMatrix straight = tt_forward(src, est.rho_e, est.u_vec);
    SeparationResult sep = separate_windowed(straight, layout, opt);
    out.movers.push_back(tt_inverse(sep.stationary, est.rho_e, est.u_vec));
    src = tt_inverse(sep.moving, est.rho_e, est.u_vec);
    out.diagnostics.push_back(std::move(sep));
  }
  out.residual = std::move(src);
  return out;
}

LocationEstimate estimate_location(const TraceMatrix& d, const Vec3& u_vec, const ImageGrid& grid,
                                   const PulseSpec& pulse) {
  const SarImage img = image_compensated(d, grid, pulse, u_vec);
  LocationEstimate loc;
  const auto peaks = peak_extract(img, 1, 0.0);
  if (peaks.empty()) {
    loc.unfocused = true;
    return loc;
  }
  loc.rho = peaks[0].position;
  loc.peak = peaks[0].value;
  std::vector<double> vals(img.envelope.data(), img.envelope.data() + img.envelope.size());
  std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
  const double med = vals[vals.size() / 2];
  loc.contrast = med > 0.0 ? loc.peak / med : INFINITY;
  loc.unfocused = loc.contrast < std::sqrt(2.0);
  return loc;
}

FocusSearch focus_search(const TraceMatrix& d, double u, const ImageGrid& grid, const SpeedGrid& cross,
                         const PulseSpec& pulse) {
  const ViewFrame frame = ViewFrame::make(d.traj, d.rho_o);
  FocusSearch out;
  out.grid = cross.points();
  out.peaks.assign(out.grid.size(), 0.0);
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    const SarImage img = image_compensated(d, grid, pulse, compose_velocity(frame, u, out.grid[i]));
    out.peaks[i] = img.envelope.maxCoeff();
  }
  const int best = static_cast<int>(std::max_element(out.peaks.begin(), out.peaks.end()) - out.peaks.begin());
  out.u_perp = parabolic_vertex(out.grid, out.peaks, best);
  out.location = estimate_location(d, compose_velocity(frame, u, out.u_perp), grid, pulse);
  return out;
}

}  // namespace sarsep
