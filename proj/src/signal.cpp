// SPDX-License-Identifier: Apache-2.0
#include "sarsep/signal.hpp"

#include <cmath>
#include <stdexcept>

#include "sarsep/fft.hpp"
#include "sarsep/kernels.hpp"

namespace sarsep {

void PulseSpec::validate() const {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("pulse bandwidth must be positive");
  if (!(omega0 > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
}

void FastTimeAxis::validate(const PulseSpec& pulse) const {
  if (m < 2 || m % 2 != 0) throw std::invalid_argument("fast-time sample count must be even");
  if (!(dt > 0.0)) throw std::invalid_argument("fast-time spacing must be positive");
  const double nyquist = 1.0 / (2.0 * (pulse.nu0() + pulse.bandwidth / 2.0));
  if (dt > nyquist) throw std::invalid_argument("fast-time spacing violates the Nyquist limit");
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::raw: return "raw";
    case Provenance::range_compressed: return "range-compressed";
    case Provenance::transformed: return "transformed";
    case Provenance::filtered: return "filtered";
  }
  return "unknown";
}

Provenance provenance_from(const std::string& name) {
  if (name == "raw") return Provenance::raw;
  if (name == "range-compressed") return Provenance::range_compressed;
  if (name == "transformed") return Provenance::transformed;
  if (name == "filtered") return Provenance::filtered;
  throw std::invalid_argument("unknown provenance tag: " + name);
}

TraceMatrix TraceMatrix::zeros(const Aperture& a, const FastTimeAxis& f, const Trajectory& traj,
                               const Vec3& rho_o, Provenance tag) {
  TraceMatrix d;
  d.values = RowMat::Zero(a.rows(), f.cols());
  d.slow = a;
  d.fast = f;
  d.tag = tag;
  d.traj = traj;
  d.rho_o = rho_o;
  d.row_lo = 0;
  d.row_hi = a.rows();
  return d;
}

TraceMatrix TraceMatrix::like(Provenance t) const {
  TraceMatrix d = zeros(slow, fast, traj, rho_o, t);
  d.row_lo = row_lo;
  d.row_hi = row_hi;
  return d;
}

double TraceMatrix::norm() const { return std::sqrt(energy()); }

double TraceMatrix::energy() const {
  if (row_hi <= row_lo) return 0.0;
  return values.middleRows(row_lo, row_hi - row_lo).squaredNorm();
}

void TraceMatrix::check_consistent() const {
  if (values.rows() != slow.rows() || values.cols() != fast.cols())
    throw std::invalid_argument("trace matrix dimensions do not match its axes");
  if (!values.allFinite()) throw std::invalid_argument("trace matrix has non-finite entries");
}

double pulse_eval(const PulseSpec& p, double t) {
  return std::cos(p.omega0 * t) * std::exp(-0.5 * p.bandwidth * p.bandwidth * t * t);
}

double pulse_envelope(const PulseSpec& p, double t) {
  return std::exp(-0.5 * p.bandwidth * p.bandwidth * t * t);
}

void fast_time_shift_inplace(RowMat& values, int row_lo, int row_hi, double dt,
                             const std::vector<double>& shift) {
  const int n = static_cast<int>(values.cols());
  RealFft fft(n);
  const int nb = static_cast<int>(fft.bins());
  const double base = 2.0 * kPi / (n * dt);
#pragma omp parallel
  {
    std::vector<cplx> spec(nb);
#pragma omp for schedule(static)
    for (int j = row_lo; j < row_hi; ++j) {
      if (shift[j] == 0.0) continue;
      double* row = values.row(j).data();
      fft.forward(row, spec.data());
      kernels::phase_ramp(spec.data(), nb, base * shift[j]);
      if (n % 2 == 0) spec[nb - 1] = cplx(spec[nb - 1].real() * std::cos(kPi * shift[j] / dt), 0.0);
      fft.inverse(spec.data(), row);
    }
  }
}

TraceMatrix fast_time_shift(const TraceMatrix& d, const std::vector<double>& shift,
                            ShiftReport* report) {
  if (static_cast<int>(shift.size()) != d.rows())
    throw std::invalid_argument("one shift per slow-time row is required");
  TraceMatrix out = d;
  fast_time_shift_inplace(out.values, d.row_lo, d.row_hi, d.fast.dt, shift);
  if (report) {
    report->max_abs_shift = 0.0;
    for (int j = d.row_lo; j < d.row_hi; ++j)
      report->max_abs_shift = std::max(report->max_abs_shift, std::abs(shift[j]));
    report->wrap_warning = report->max_abs_shift > 0.25 * 2.0 * d.fast.half_width();
  }
  return out;
}

namespace {

std::vector<double> reference_delays(const TraceMatrix& d) {
  std::vector<double> shift(d.rows());
  for (int j = 0; j < d.rows(); ++j) {
    // tau(s, rho_o) - tau(0, rho_o) without cancellation
    const Vec3 a = d.traj.position(d.s(j)) - d.rho_o;
    const Vec3 b = d.traj.position(0.0) - d.rho_o;
    shift[j] = 2.0 * (a - b).dot(a + b) / (a.norm() + b.norm()) / kSpeedOfLight;
  }
  return shift;
}

}  // namespace

TraceMatrix range_compress(const TraceMatrix& raw) {
  if (raw.tag != Provenance::raw) throw std::invalid_argument("range compression expects raw traces");
  TraceMatrix out = fast_time_shift(raw, reference_delays(raw));
  out.fast.t_center = raw.fast.t_center - travel_time(raw.traj, 0.0, raw.rho_o);
  out.tag = Provenance::range_compressed;
  return out;
}

TraceMatrix range_expand(const TraceMatrix& compressed) {
  std::vector<double> shift = reference_delays(compressed);
  for (double& v : shift) v = -v;
  TraceMatrix out = fast_time_shift(compressed, shift);
  out.fast.t_center = compressed.fast.t_center + travel_time(compressed.traj, 0.0, compressed.rho_o);
  out.tag = Provenance::raw;
  return out;
}

RowMat envelope(const RowMat& values) {
  const int n = static_cast<int>(values.cols());
  RowMat out(values.rows(), n);
  ComplexFft fft(n);
#pragma omp parallel
  {
    std::vector<cplx> a(n), spec(n);
#pragma omp for schedule(static)
    for (int j = 0; j < static_cast<int>(values.rows()); ++j) {
      for (int l = 0; l < n; ++l) a[l] = values(j, l);
      fft.forward(a.data(), spec.data());
      for (int k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
      for (int k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
      fft.inverse(spec.data(), a.data());
      for (int l = 0; l < n; ++l) out(j, l) = std::abs(a[l]);
    }
  }
  return out;
}

double rel_error(const RowMat& a, const RowMat& b) {
  const double nb = b.norm();
  return nb > 0.0 ? (a - b).norm() / nb : (a - b).norm();
}

double correlation(const RowMat& a, const RowMat& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.cwiseProduct(b).sum() / (na * nb);
}

}  // namespace sarsep
