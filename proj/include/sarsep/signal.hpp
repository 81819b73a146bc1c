// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sarsep/geom.hpp"

namespace sarsep {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PulseSpec {
  double omega0 = 2.0 * kPi * 9.6e9;  // rad/s
  double bandwidth = 622e6;           // B in exp(-B^2 t^2 / 2)

  double nu0() const { return omega0 / (2.0 * kPi); }
  // True when B < nu0 / 4.
  bool narrowband() const { return bandwidth < nu0() / 4.0; }
  void validate() const;
};

// Samples t_l = t_center + (l - m/2) dt, l = 0..m.
struct FastTimeAxis {
  int m = 0;
  double dt = 0.0;
  double t_center = 0.0;

  int cols() const { return m + 1; }
  double t(int l) const { return t_center + (l - m / 2) * dt; }
  double half_width() const { return 0.5 * m * dt; }
  void validate(const PulseSpec& pulse) const;
};

enum class Provenance { raw, range_compressed, transformed, filtered };
const char* provenance_name(Provenance p);
Provenance provenance_from(const std::string& name);

struct TraceMatrix {
  RowMat values;
  Aperture slow;
  FastTimeAxis fast;
  Provenance tag = Provenance::range_compressed;
  Trajectory traj;
  Vec3 rho_o = Vec3::Zero();
  // Rows [row_lo, row_hi) hold valid data; the rest are zero padding.
  int row_lo = 0;
  int row_hi = 0;

  static TraceMatrix zeros(const Aperture& a, const FastTimeAxis& f, const Trajectory& traj,
                           const Vec3& rho_o, Provenance tag);
  TraceMatrix like(Provenance tag) const;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
  double s(int row) const { return slow.s(row); }
  // Frobenius norm over the valid rows.
  double norm() const;
  double energy() const;
  void check_consistent() const;
};

double pulse_eval(const PulseSpec& p, double t);
double pulse_envelope(const PulseSpec& p, double t);
// Samples beyond this many 1/B from the pulse center are treated as zero.
inline constexpr double kPulseSupport = 9.0;

struct ShiftReport {
  double max_abs_shift = 0.0;
  bool wrap_warning = false;  // some |shift| exceeded 25% of the gate
};

// Row j becomes in_j(t + shift[j]) by spectral phase modulation with a
// periodic gate.
TraceMatrix fast_time_shift(const TraceMatrix& d, const std::vector<double>& shift,
                            ShiftReport* report = nullptr);
void fast_time_shift_inplace(RowMat& values, int row_lo, int row_hi, double dt,
                             const std::vector<double>& shift);

TraceMatrix range_compress(const TraceMatrix& raw);
TraceMatrix range_expand(const TraceMatrix& compressed);

// |analytic signal| of each row.
RowMat envelope(const RowMat& values);

// Relative Frobenius distance ||a - b|| / ||b||.
double rel_error(const RowMat& a, const RowMat& b);
// Normalized inner product <a, b> / (|a| |b|).
double correlation(const RowMat& a, const RowMat& b);

}  // namespace sarsep
