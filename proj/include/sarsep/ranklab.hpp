// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sarsep/scenesim.hpp"

namespace sarsep {

// Trace-covariance parameters for one or two targets.
struct AlphaParams {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta = 0.0;  // seconds
  int targets = 1;
  int g = 0;          // > 0 when alpha2/alpha1 is a negative integer
  double zeta = 0.0;  // beta / (alpha1 ds), signed
};

// Y = M M^T over the valid rows.
Eigen::MatrixXd covariance(const TraceMatrix& m);
// Same product for simulated point targets, from per-row pulse supports.
Eigen::MatrixXd covariance_of_targets(const SceneSpec& scene, const std::vector<Target>& targets);

double alpha_of(const Trajectory& traj, const Vec3& rho_o, const Target& target);
AlphaParams two_target_params(const Trajectory& traj, const Vec3& rho_o, const Target& t1, const Target& t2,
                              double ds);
// B |beta|
double range_separation_product(const AlphaParams& p, const PulseSpec& pulse);

// Closed-form covariance sampled at the given slow times; two-target form
// includes the cross terms when with_cross is set.
Eigen::MatrixXd theoretical_covariance(const AlphaParams& p, const PulseSpec& pulse, const std::vector<double>& s,
                                       double dt, bool with_cross = true);
std::vector<double> aperture_times(const Aperture& a);

// y_j, j = 0..count-1, for one or two targets (Toeplitz generator).
std::vector<double> toeplitz_sequence(const AlphaParams& p, const PulseSpec& pulse, double ds, double dt, int count);
// h_j, j = 0..count-1 (g-Hankel generator).
std::vector<double> hankel_sequence(const AlphaParams& p, const PulseSpec& pulse, double ds, double dt, int count);

struct Structured {
  Eigen::MatrixXd toeplitz;
  Eigen::MatrixXd hankel;
};
// T_jl = y_|j-l|, H_jl = h_{j + g l}, zero-based, (n+1) x (n+1). Throws
// std::length_error naming the required sequence length.
Structured build_structured(const std::vector<double>& y, const std::vector<double>& h, int g, int n);

struct SymbolSamples {
  std::vector<double> theta;
  std::vector<double> value;
  int truncation = 0;
  bool truncation_ok = true;  // |y_J| <= 1e-12 |y_0| reached before J = n
};
// y_0 + 2 sum_{j=1}^{J} y_j cos(j theta), J = min(n, first negligible index).
SymbolSamples symbol(const std::vector<double>& y, int n, int grid = 4096);
// Fraction of theta with symbol above eps * max.
double symbol_rank_fraction(const SymbolSamples& sym, double eps);

double szego_rank_estimate(double alpha, const PulseSpec& pulse, double ds, double eps);

int numeric_rank(const Eigen::VectorXd& eigenvalues_desc, double eps);
Eigen::VectorXd eigenvalues_desc(const Eigen::MatrixXd& y);

struct RankReport {
  double parameter = 0.0;
  Eigen::VectorXd eigenvalues;
  int computed_rank = 0;
  double estimated_fraction = 0.0;
  int estimated_rank = 0;
  double alpha = 0.0;
  int n = 0;
  double eps = 0.01;
  SymbolSamples sym;
};

struct RankStudyConfig {
  std::string mode = "single-mover";  // single-stationary | single-mover | two-target
  std::vector<double> sweep;          // m/s for movers, m cross-range offset otherwise
  int n = 116;
  double eps = 0.01;
  double dt = 0.0;                    // <= 0: 1/(5 nu0)
  Trajectory traj;
  Vec3 rho_o = Vec3::Zero();
  double ds = 0.015;
  PulseSpec pulse;
  Vec3 fixed_target = Vec3(5, 5, 0);  // two-target mode
  double moving_x = -5.0;             // two-target mode: second target at (moving_x, sweep, 0)
  bool keep_symbol = false;
};

std::vector<RankReport> rank_study(const RankStudyConfig& cfg);

}  // namespace sarsep
