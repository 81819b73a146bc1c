// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "sarsep/geom.hpp"
#include "sarsep/signal.hpp"

namespace sarsep {

struct ImageGrid {
  Vec3 center = Vec3::Zero();
  double extent_x = 50.0;  // full widths, m
  double extent_y = 50.0;
  double spacing_x = 0.12;
  double spacing_y = 0.6;

  int nx() const { return static_cast<int>(std::floor(extent_x / spacing_x + 1e-9)) + 1; }
  int ny() const { return static_cast<int>(std::floor(extent_y / spacing_y + 1e-9)) + 1; }
  Vec3 pixel(int ix, int iy) const;
  void validate() const;
};

// Range and cross-range resolution c/B and lambda L / a for the data geometry.
struct Resolution {
  double range = 0.0;
  double cross_range = 0.0;
};
Resolution nominal_resolution(const TraceMatrix& d, const PulseSpec& pulse);
ImageGrid default_grid(const TraceMatrix& d, const PulseSpec& pulse, const Vec3& center, double extent_x,
                       double extent_y);

struct SarImage {
  ImageGrid grid;
  RowMat raw;       // [iy, ix], sum of trace samples
  RowMat envelope;  // |quadrature sum|
  bool compensated = false;
  Vec3 u_vec = Vec3::Zero();
  long long out_of_gate = 0;  // samples that fell outside the gate
};

enum class Interp { baseband_cubic, spectral };

SarImage image(const TraceMatrix& d, const ImageGrid& grid, const PulseSpec& pulse,
               Interp interp = Interp::baseband_cubic);
SarImage image_compensated(const TraceMatrix& d, const ImageGrid& grid, const PulseSpec& pulse,
                           const Vec3& u_vec, Interp interp = Interp::baseband_cubic);

struct ImagePeak {
  Vec3 position = Vec3::Zero();
  double value = 0.0;
};

// Up to k local maxima of the envelope, strongest first, at least min_sep
// apart, with quadratic sub-pixel refinement.
std::vector<ImagePeak> peak_extract(const SarImage& img, int k, double min_sep, double min_rel = 0.0);

// Focus metric: max / l2 norm of the envelope.
double focus_metric(const SarImage& img);

}  // namespace sarsep
