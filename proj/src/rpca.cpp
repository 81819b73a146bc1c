// SPDX-License-Identifier: Apache-2.0
#include "sarsep/rpca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sarsep/kernels.hpp"
#include "sarsep/svd.hpp"

namespace sarsep {

namespace {

double spectral_norm(const Eigen::MatrixXd& m, int full_limit) {
  if (std::min(m.rows(), m.cols()) <= full_limit) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
  }
  return partial_svd(m, 1, 1e-8).s(0);
}

}  // namespace

double pcp_objective(const Eigen::MatrixXd& low, const Eigen::MatrixXd& sparse, double eta) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(low);
  return svd.singularValues().sum() + eta * sparse.cwiseAbs().sum();
}

PcpSolution pcp_solve(const Eigen::MatrixXd& m, const PcpOptions& opt) {
  if (!m.allFinite()) throw std::invalid_argument("pcp input has non-finite entries");
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  PcpSolution sol;
  sol.eta = opt.eta > 0.0 ? opt.eta : opt.eta_scale / std::sqrt(static_cast<double>(std::max(rows, cols)));
  sol.low = Eigen::MatrixXd::Zero(rows, cols);
  sol.sparse = Eigen::MatrixXd::Zero(rows, cols);

  const double m_fro = m.norm();
  if (m_fro == 0.0) {
    sol.iterations = 1;
    sol.converged = true;
    return sol;
  }
  const double m_two = spectral_norm(m, opt.full_svd_limit);
  const double m_inf = m.cwiseAbs().maxCoeff() / sol.eta;
  Eigen::MatrixXd y = m / std::max(m_two, m_inf);
  double mu = opt.mu0_scale / m_two;
  const double mu_cap = mu * opt.mu_cap_ratio;

  Eigen::MatrixXd work(rows, cols);
  int rank_hint = 1;
  SvtResult svt;
  for (int it = 1; it <= opt.max_iter; ++it) {
    work = m - sol.low + y / mu;
    kernels::soft_threshold(work.data(), sol.sparse.data(), static_cast<std::size_t>(work.size()),
                            sol.eta / mu);
    work = m - sol.sparse + y / mu;
    svt = singular_value_threshold(work, 1.0 / mu, rank_hint, opt.full_svd_limit);
    sol.low = std::move(svt.low);
    rank_hint = std::max(1, svt.kept);
    work = m - sol.low - sol.sparse;
    y += mu * work;
    mu = std::min(mu * opt.mu_growth, mu_cap);
    sol.iterations = it;
    sol.feasibility = work.norm() / m_fro;
    if (sol.feasibility <= opt.tol) {
      sol.converged = true;
      break;
    }
  }
  if (svt.kept > 0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(sol.low);
    const auto& s = svd.singularValues();
    int r = 0;
    while (r < s.size() && s(r) > 1e-8 * s(0)) ++r;
    sol.rank = r;
  }
  sol.nonzero_fraction =
      static_cast<double>((sol.sparse.array() != 0.0).count()) / static_cast<double>(sol.sparse.size());
  return sol;
}

void WindowLayout::validate(int axis_len) const {
  if (length <= 0) throw std::invalid_argument("window length must be positive");
  if (overlap < 0 || overlap >= length) throw std::invalid_argument("window overlap must lie in [0, length)");
  if (axis_len <= 0) throw std::invalid_argument("empty fast-time axis");
}

std::vector<WindowSpan> tile_windows(int n, const WindowLayout& layout) {
  layout.validate(n);
  const int len = std::min(layout.length, n);
  if (len == n) return {{0, n}};
  const int step = len - layout.overlap;
  const int count = 1 + (n - len + step - 1) / step;
  std::vector<WindowSpan> spans(count);
  for (int k = 0; k < count; ++k) {
    const long long start = static_cast<long long>(k) * (n - len) / (count - 1);
    spans[k] = {static_cast<int>(start), len};
  }
  return spans;
}

std::vector<std::vector<double>> crossfade_weights(int n, const std::vector<WindowSpan>& spans, int overlap) {
  std::vector<std::vector<double>> w(spans.size());
  std::vector<double> total(n, 0.0);
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const WindowSpan& sp = spans[k];
    w[k].assign(sp.length, 1.0);
    for (int i = 0; i < sp.length; ++i) {
      const int col = sp.start + i;
      double t = 1.0;
      if (overlap > 0) {
        if (sp.start > 0 && i < overlap) t = std::min(t, (i + 1.0) / (overlap + 1.0));
        const int from_end = sp.length - 1 - i;
        if (sp.start + sp.length < n && from_end < overlap) t = std::min(t, (from_end + 1.0) / (overlap + 1.0));
      }
      w[k][i] = t;
      total[col] += t;
    }
  }
  for (std::size_t k = 0; k < spans.size(); ++k)
    for (int i = 0; i < spans[k].length; ++i) w[k][i] /= total[spans[k].start + i];
  return w;
}

SeparationResult separate_windowed(const TraceMatrix& d, const WindowLayout& layout, const PcpOptions& opt) {
  const int n = d.cols();
  const auto spans = tile_windows(n, layout);
  const auto weights = crossfade_weights(n, spans, layout.overlap);
  SeparationResult res;
  res.stationary = d.like(d.tag);
  res.moving = d.like(d.tag);
  res.windows.resize(spans.size());
  const int r0 = d.row_lo;
  const int nr = d.row_hi - d.row_lo;
  std::vector<PcpSolution> sols(spans.size());
  std::string failure;

#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < static_cast<int>(spans.size()); ++k) {
    try {
      const Eigen::MatrixXd block = d.values.block(r0, spans[k].start, nr, spans[k].length);
      sols[k] = pcp_solve(block, opt);
    } catch (const std::exception& e) {
#pragma omp critical
      failure = "window " + std::to_string(k) + ": " + e.what();
    }
  }
  if (!failure.empty()) throw std::runtime_error(failure);

  for (std::size_t k = 0; k < spans.size(); ++k) {
    const auto& sp = spans[k];
    for (int i = 0; i < sp.length; ++i) {
      const double wk = weights[k][i];
      res.stationary.values.block(r0, sp.start + i, nr, 1) += wk * sols[k].low.col(i);
      res.moving.values.block(r0, sp.start + i, nr, 1) += wk * sols[k].sparse.col(i);
    }
    WindowDiag& wd = res.windows[k];
    wd.span = sp;
    wd.iterations = sols[k].iterations;
    wd.feasibility = sols[k].feasibility;
    wd.rank = sols[k].rank;
    wd.nonzero_fraction = sols[k].nonzero_fraction;
    wd.converged = sols[k].converged;
    res.converged = res.converged && wd.converged;
  }
  const double dn = d.norm();
  const RowMat resid = d.values - res.stationary.values - res.moving.values;
  res.feasibility = dn > 0.0 ? resid.norm() / dn : resid.norm();
  return res;
}

WindowLayout choose_window(const TraceMatrix& d, const PulseSpec& pulse, double pulse_widths) {
  WindowLayout w;
  const int raw = static_cast<int>(std::lround(pulse_widths / (pulse.bandwidth * d.fast.dt)));
  w.length = d.cols() < 64 ? d.cols() : std::clamp(raw, 64, d.cols());
  w.overlap = w.length >= d.cols() ? 0 : w.length / 8;
  w.taper = w.overlap > 0 ? "linear" : "rectangular";
  return w;
}

}  // namespace sarsep
