// SPDX-License-Identifier: Apache-2.0
#include "sarsep/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sarsep/fft.hpp"

namespace sarsep {

Vec3 ImageGrid::pixel(int ix, int iy) const {
  const double x = (ix - 0.5 * (nx() - 1)) * spacing_x;
  const double y = (iy - 0.5 * (ny() - 1)) * spacing_y;
  return center + Vec3(x, y, 0.0);
}

void ImageGrid::validate() const {
  if (!(spacing_x > 0.0) || !(spacing_y > 0.0)) throw std::invalid_argument("pixel spacing must be positive");
  if (!(extent_x >= 0.0) || !(extent_y >= 0.0)) throw std::invalid_argument("grid extent must be non-negative");
}

Resolution nominal_resolution(const TraceMatrix& d, const PulseSpec& pulse) {
  Resolution r;
  r.range = kSpeedOfLight / pulse.bandwidth;
  const double lambda = kSpeedOfLight / pulse.nu0();
  const double a = d.traj.platform_speed() * d.slow.n * d.slow.ds;
  r.cross_range = lambda * (d.traj.position(0.0) - d.rho_o).norm() / a;
  return r;
}

ImageGrid default_grid(const TraceMatrix& d, const PulseSpec& pulse, const Vec3& center, double extent_x,
                       double extent_y) {
  const Resolution r = nominal_resolution(d, pulse);
  ImageGrid g;
  g.center = center;
  g.extent_x = extent_x;
  g.extent_y = extent_y;
  g.spacing_x = r.range / 4.0;
  g.spacing_y = r.cross_range / 4.0;
  return g;
}

namespace {

// Analytic signal of each row demodulated by exp(-i w0 t_l).
std::vector<std::vector<cplx>> baseband_rows(const TraceMatrix& d, const PulseSpec& pulse) {
  const int n = d.cols();
  std::vector<std::vector<cplx>> out(d.rows());
  ComplexFft fft(n);
  for (int j = d.row_lo; j < d.row_hi; ++j) {
    std::vector<cplx> a(n), spec(n);
    for (int l = 0; l < n; ++l) a[l] = d.values(j, l);
    fft.forward(a.data(), spec.data());
    for (int k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
    for (int k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
    fft.inverse(spec.data(), a.data());
    for (int l = 0; l < n; ++l) a[l] *= std::polar(1.0, -pulse.omega0 * d.fast.t(l));
    out[j] = std::move(a);
  }
  return out;
}

// One-sided spectra of the analytic rows, for exact evaluation.
std::vector<std::vector<cplx>> analytic_spectra(const TraceMatrix& d) {
  const int n = d.cols();
  std::vector<std::vector<cplx>> out(d.rows());
  RealFft fft(n);
  for (int j = d.row_lo; j < d.row_hi; ++j) {
    std::vector<cplx> spec(fft.bins());
    fft.forward(d.values.row(j).data(), spec.data());
    out[j] = std::move(spec);
  }
  return out;
}

inline cplx keys_cubic(const cplx* p, double frac) {
  const double t = frac, t2 = t * t, t3 = t2 * t;
  const double w0 = -0.5 * t3 + t2 - 0.5 * t;
  const double w1 = 1.5 * t3 - 2.5 * t2 + 1.0;
  const double w2 = -1.5 * t3 + 2.0 * t2 + 0.5 * t;
  const double w3 = 0.5 * t3 - 0.5 * t2;
  return w0 * p[0] + w1 * p[1] + w2 * p[2] + w3 * p[3];
}

SarImage form_image(const TraceMatrix& d, const ImageGrid& grid, const PulseSpec& pulse, const Vec3& u_vec,
                    Interp interp) {
  grid.validate();
  SarImage img;
  img.grid = grid;
  const int nx = grid.nx(), ny = grid.ny();
  img.raw = RowMat::Zero(ny, nx);
  img.envelope = RowMat::Zero(ny, nx);
  img.u_vec = u_vec;
  img.compensated = u_vec.squaredNorm() > 0.0;

  const int n = d.cols();
  const int m = d.fast.m;
  std::vector<std::vector<cplx>> rows =
      interp == Interp::baseband_cubic ? baseband_rows(d, pulse) : analytic_spectra(d);
  long long missed = 0;

#pragma omp parallel for schedule(dynamic, 4) reduction(+ : missed)
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const Vec3 rho = grid.pixel(ix, iy);
      cplx acc = 0.0;
      for (int j = d.row_lo; j < d.row_hi; ++j) {
        const double s = d.s(j);
        const double t = delta_tau(d.traj, s, rho + s * u_vec, d.rho_o);
        const double pos = (t - d.fast.t_center) / d.fast.dt + m / 2;
        if (interp == Interp::baseband_cubic) {
          const int i0 = static_cast<int>(std::floor(pos));
          if (i0 < 1 || i0 + 2 > m) {
            ++missed;
            continue;
          }
          acc += keys_cubic(rows[j].data() + i0 - 1, pos - i0) * std::polar(1.0, pulse.omega0 * t);
        } else {
          if (pos < 0.0 || pos > m) {
            ++missed;
            continue;
          }
          // sum_k c_k X_k exp(2 pi i k pos / n), c_0 = 1, c_k = 2 below Nyquist
          const auto& spec = rows[j];
          const int nb = static_cast<int>(spec.size());
          cplx v = spec[0];
          const cplx step = std::polar(1.0, 2.0 * kPi * pos / n);
          cplx w = step;
          for (int k = 1; k < nb; ++k) {
            const double c = (n % 2 == 0 && k == nb - 1) ? 1.0 : 2.0;
            v += c * spec[k] * w;
            w *= step;
          }
          acc += v / static_cast<double>(n);
        }
      }
      img.raw(iy, ix) = acc.real();
      img.envelope(iy, ix) = std::abs(acc);
    }
  }
  img.out_of_gate = missed;
  return img;
}

}  // namespace

SarImage image(const TraceMatrix& d, const ImageGrid& grid, const PulseSpec& pulse, Interp interp) {
  return form_image(d, grid, pulse, Vec3::Zero(), interp);
}

SarImage image_compensated(const TraceMatrix& d, const ImageGrid& grid, const PulseSpec& pulse,
                           const Vec3& u_vec, Interp interp) {
  if (u_vec.z() != 0.0) throw std::invalid_argument("compensation velocity must be horizontal");
  return form_image(d, grid, pulse, u_vec, interp);
}

std::vector<ImagePeak> peak_extract(const SarImage& img, int k, double min_sep, double min_rel) {
  if (k < 1) throw std::invalid_argument("peak count must be at least 1");
  const RowMat& e = img.envelope;
  const int ny = static_cast<int>(e.rows()), nx = static_cast<int>(e.cols());
  if (e.size() == 0) return {};
  const double top = e.maxCoeff();
  if (!(top > 0.0)) return {};
  struct Cand {
    int ix, iy;
    double v;
  };
  std::vector<Cand> cands;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const double v = e(iy, ix);
      if (v <= min_rel * top || v <= 0.0) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (!dx && !dy) continue;
          const int x = ix + dx, y = iy + dy;
          if (x < 0 || y < 0 || x >= nx || y >= ny) continue;
          if (e(y, x) > v || (e(y, x) == v && (y * nx + x) < (iy * nx + ix))) {
            is_max = false;
            break;
          }
        }
      if (is_max) cands.push_back({ix, iy, v});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.v > b.v; });
  std::vector<ImagePeak> out;
  for (const Cand& c : cands) {
    if (static_cast<int>(out.size()) >= k) break;
    Vec3 p = img.grid.pixel(c.ix, c.iy);
    auto refine = [](double a, double b, double cc) {
      const double den = a - 2.0 * b + cc;
      return den < 0.0 ? 0.5 * (a - cc) / den : 0.0;
    };
    if (c.ix > 0 && c.ix + 1 < nx) p.x() += refine(e(c.iy, c.ix - 1), c.v, e(c.iy, c.ix + 1)) * img.grid.spacing_x;
    if (c.iy > 0 && c.iy + 1 < ny) p.y() += refine(e(c.iy - 1, c.ix), c.v, e(c.iy + 1, c.ix)) * img.grid.spacing_y;
    bool clear = true;
    for (const ImagePeak& q : out)
      if ((q.position - p).norm() < min_sep) clear = false;
    if (clear) out.push_back({p, c.v});
  }
  return out;
}

double focus_metric(const SarImage& img) {
  const double n = img.envelope.norm();
  return n > 0.0 ? img.envelope.maxCoeff() / n : 0.0;
}

}  // namespace sarsep
