// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace sarsep {

struct SvdTriplets {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;  // descending
  Eigen::MatrixXd v;
  double max_residual = 0.0;
};

SvdTriplets thin_svd(const Eigen::MatrixXd& a);

// Top-k singular triplets by Golub-Kahan-Lanczos bidiagonalization with full
// reorthogonalization. Steps are added until every returned triplet has
// residual <= tol * ||A||_2 or the Krylov space is exhausted.
SvdTriplets partial_svd(const Eigen::MatrixXd& a, int k, double tol = 1e-10, std::uint64_t seed = 7);

struct SvtResult {
  Eigen::MatrixXd low;
  int kept = 0;
  double sigma_max = 0.0;
  double sigma_min_kept = 0.0;
};

// U max(S - tau, 0) V^T. Full SVD when min(rows, cols) <= full_limit, else
// partial SVD with the rank guess grown until the tail falls below tau.
SvtResult singular_value_threshold(const Eigen::MatrixXd& a, double tau, int rank_hint,
                                   int full_limit = 512);

}  // namespace sarsep
