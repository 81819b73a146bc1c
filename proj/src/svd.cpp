// SPDX-License-Identifier: Apache-2.0
#include "sarsep/svd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace sarsep {

SvdTriplets thin_svd(const Eigen::MatrixXd& a) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV(), 0.0};
}

namespace {

// Two passes of classical Gram-Schmidt against the first `count` columns.
void reorthogonalize(const Eigen::MatrixXd& basis, int count, Eigen::VectorXd& x) {
  if (count == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd c = basis.leftCols(count).transpose() * x;
    x.noalias() -= basis.leftCols(count) * c;
  }
}

}  // namespace

SvdTriplets partial_svd(const Eigen::MatrixXd& a, int k, double tol, std::uint64_t seed) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  const int min_dim = std::min(rows, cols);
  k = std::clamp(k, 1, min_dim);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd U(rows, min_dim);
  Eigen::MatrixXd V(cols, min_dim + 1);
  std::vector<double> alpha, beta;

  Eigen::VectorXd v(cols);
  for (int i = 0; i < cols; ++i) v(i) = gauss(rng);
  V.col(0) = v.normalized();

  int steps = 0;
  int target = std::min(min_dim, k + std::max(10, k));
  bool exhausted = false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);

  for (;;) {
    while (steps < target && !exhausted) {
      Eigen::VectorXd u = a * V.col(steps);
      if (steps > 0) u -= beta[steps - 1] * U.col(steps - 1);
      reorthogonalize(U, steps, u);
      const double al = u.norm();
      if (al <= 1e-14 * scale) {
        exhausted = true;
        break;
      }
      U.col(steps) = u / al;
      alpha.push_back(al);
      Eigen::VectorXd w = a.transpose() * U.col(steps) - al * V.col(steps);
      reorthogonalize(V, steps + 1, w);
      const double be = w.norm();
      beta.push_back(be);
      ++steps;
      if (be <= 1e-14 * scale) {
        exhausted = true;
        break;
      }
      V.col(steps) = w / be;
    }

    const int p = steps;
    SvdTriplets out;
    if (p == 0) {
      out.u = Eigen::MatrixXd::Zero(rows, k);
      out.s = Eigen::VectorXd::Zero(k);
      out.v = Eigen::MatrixXd::Zero(cols, k);
      return out;
    }
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < p; ++i) {
      b(i, i) = alpha[i];
      if (i + 1 < p) b(i, i + 1) = beta[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> bs(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const int kk = std::min(k, p);
    const double norm2 = bs.singularValues()(0);
    double worst = 0.0;
    const double tail = exhausted ? 0.0 : beta[p - 1];
    for (int i = 0; i < kk; ++i) worst = std::max(worst, tail * std::abs(bs.matrixU()(p - 1, i)));

    if (worst <= tol * norm2 || exhausted || steps >= min_dim) {
      out.u = Eigen::MatrixXd::Zero(rows, k);
      out.s = Eigen::VectorXd::Zero(k);
      out.v = Eigen::MatrixXd::Zero(cols, k);
      out.u.leftCols(kk) = U.leftCols(p) * bs.matrixU().leftCols(kk);
      out.v.leftCols(kk) = V.leftCols(p) * bs.matrixV().leftCols(kk);
      out.s.head(kk) = bs.singularValues().head(kk);
      out.max_residual = norm2 > 0.0 ? worst / norm2 : 0.0;
      return out;
    }
    target = std::min(min_dim, 2 * target);
  }
}

SvtResult singular_value_threshold(const Eigen::MatrixXd& a, double tau, int rank_hint, int full_limit) {
  const int min_dim = static_cast<int>(std::min(a.rows(), a.cols()));
  SvdTriplets t;
  if (min_dim <= full_limit) {
    t = thin_svd(a);
  } else {
    int k = std::clamp(rank_hint + 5, 1, min_dim);
    for (;;) {
      t = partial_svd(a, k);
      if (t.s(k - 1) <= tau || k == min_dim) break;
      k = std::min(min_dim, 2 * k);
    }
  }
  SvtResult r;
  r.sigma_max = t.s.size() ? t.s(0) : 0.0;
  int kept = 0;
  while (kept < t.s.size() && t.s(kept) > tau) ++kept;
  r.kept = kept;
  r.sigma_min_kept = kept ? t.s(kept - 1) : 0.0;
  if (kept == 0) {
    r.low = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    return r;
  }
  const Eigen::VectorXd shrunk = (t.s.head(kept).array() - tau).matrix();
  r.low.noalias() = t.u.leftCols(kept) * shrunk.asDiagonal() * t.v.leftCols(kept).transpose();
  return r;
}

}  // namespace sarsep
