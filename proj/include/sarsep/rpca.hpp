// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sarsep/signal.hpp"

namespace sarsep {

struct PcpOptions {
  double eta = -1.0;  // <= 0: eta_scale/sqrt(max(rows, cols))
  double eta_scale = 1.0;
  double mu0_scale = 1.25;
  double mu_growth = 1.6;
  double mu_cap_ratio = 1e7;
  double tol = 1e-7;
  int max_iter = 1000;
  int full_svd_limit = 512;
};

struct PcpSolution {
  Eigen::MatrixXd low;
  Eigen::MatrixXd sparse;
  int iterations = 0;
  double feasibility = 0.0;  // ||M - L - S||_F / ||M||_F
  int rank = 0;              // singular values of L above 1e-8 sigma_max(L)
  double nonzero_fraction = 0.0;
  double eta = 0.0;
  bool converged = false;
};

// min ||L||_* + eta ||S||_1 s.t. L + S = M, inexact augmented Lagrangian.
// Throws std::invalid_argument on non-finite input.
PcpSolution pcp_solve(const Eigen::MatrixXd& m, const PcpOptions& opt = {});

double pcp_objective(const Eigen::MatrixXd& low, const Eigen::MatrixXd& sparse, double eta);

struct WindowLayout {
  int length = 0;
  int overlap = 0;
  std::string taper = "linear";  // "rectangular" when overlap == 0
  void validate(int axis_len) const;
};

struct WindowSpan {
  int start = 0;
  int length = 0;
};

// Evenly spread windows covering [0, n) with at least `overlap` samples of
// overlap between neighbours; the last window ends at n.
std::vector<WindowSpan> tile_windows(int n, const WindowLayout& layout);
// Per-window column weights that sum to one in every column.
std::vector<std::vector<double>> crossfade_weights(int n, const std::vector<WindowSpan>& spans, int overlap);

struct WindowDiag {
  WindowSpan span;
  int iterations = 0;
  double feasibility = 0.0;
  int rank = 0;
  double nonzero_fraction = 0.0;
  bool converged = false;
};

struct SeparationResult {
  TraceMatrix stationary;  // concatenated low-rank parts
  TraceMatrix moving;      // concatenated sparse parts
  std::vector<WindowDiag> windows;
  double feasibility = 0.0;
  bool converged = true;
};

SeparationResult separate_windowed(const TraceMatrix& d, const WindowLayout& layout,
                                   const PcpOptions& opt = {});

// About sixteen compressed-pulse widths per window, clamped to [64, m+1];
// overlap is one eighth of the window.
WindowLayout choose_window(const TraceMatrix& d, const PulseSpec& pulse, double pulse_widths = 16.0);

}  // namespace sarsep
