// SPDX-License-Identifier: Apache-2.0
#include "sarsep/ranklab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sarsep/kernels.hpp"

namespace sarsep {

Eigen::MatrixXd covariance(const TraceMatrix& m) {
  const int nr = m.row_hi - m.row_lo;
  const Eigen::MatrixXd block = m.values.middleRows(m.row_lo, std::max(nr, 0));
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(nr, nr);
  y.selfadjointView<Eigen::Lower>().rankUpdate(block);
  return y.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd covariance_of_targets(const SceneSpec& scene, const std::vector<Target>& targets) {
  const int rows = scene.aperture.rows();
  const FastTimeAxis& ax = scene.axis;
  const PulseSpec& p = scene.pulse;
  const double reach = kPulseSupport / p.bandwidth / ax.dt;
  std::vector<int> lo(rows), hi(rows);
  std::vector<std::vector<double>> seg(rows);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < rows; ++j) {
    std::vector<double> delays;
    double a = 1e300, b = -1e300;
    for (const Target& q : targets) {
      const double d = target_delay(scene, q, j);
      delays.push_back(d);
      const double pos = (d - ax.t_center) / ax.dt + ax.m / 2;
      a = std::min(a, std::floor(pos - reach));
      b = std::max(b, std::ceil(pos + reach));
    }
    lo[j] = static_cast<int>(a);
    hi[j] = static_cast<int>(b) + 1;
    seg[j].assign(hi[j] - lo[j], 0.0);
    for (std::size_t q = 0; q < targets.size(); ++q)
      for (int l = lo[j]; l < hi[j]; ++l)
        seg[j][l - lo[j]] += targets[q].sigma * pulse_eval(p, ax.t_center + (l - ax.m / 2) * ax.dt - delays[q]);
  }
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(rows, rows);
#pragma omp parallel for schedule(dynamic, 8)
  for (int j = 0; j < rows; ++j)
    for (int k = 0; k <= j; ++k) {
      const int a = std::max(lo[j], lo[k]);
      const int b = std::min(hi[j], hi[k]);
      if (b <= a) continue;
      const double v = kernels::dot(seg[j].data() + (a - lo[j]), seg[k].data() + (a - lo[k]), b - a);
      y(j, k) = v;
      y(k, j) = v;
    }
  return y;
}

double alpha_of(const Trajectory& traj, const Vec3& rho_o, const Target& target) {
  const ViewFrame f = ViewFrame::make(traj, rho_o);
  const double c = kSpeedOfLight;
  const double v = traj.platform_speed();
  const Vec3 d = target.rho - rho_o;
  const Vec3& u = target.u_vec;
  return 2.0 * u.dot(f.m_hat) / c - 2.0 * v * f.t_hat.dot(f.proj * d) / (c * f.range) +
         2.0 * u.dot(f.proj * d) / (c * f.range);
}

AlphaParams two_target_params(const Trajectory& traj, const Vec3& rho_o, const Target& t1, const Target& t2,
                              double ds) {
  const ViewFrame f = ViewFrame::make(traj, rho_o);
  AlphaParams p;
  p.targets = 2;
  p.alpha1 = alpha_of(traj, rho_o, t1);
  p.alpha2 = alpha_of(traj, rho_o, t2);
  double sum = 0.0;
  const Target* ts[2] = {&t1, &t2};
  for (int j = 1; j <= 2; ++j) {
    const double r = f.m_hat.dot(ts[j - 1]->rho - rho_o);
    sum += (j % 2 ? -1.0 : 1.0) * (r + r * r / (2.0 * f.range));
  }
  p.beta = 2.0 * sum / kSpeedOfLight;
  if (p.alpha1 != 0.0) {
    p.zeta = p.beta / (p.alpha1 * ds);
    const double ratio = p.alpha2 / p.alpha1;
    const double g = std::round(-ratio);
    if (ratio < 0.0 && g >= 1.0 && std::abs(-ratio - g) <= 1e-9 * g) p.g = static_cast<int>(g);
  }
  return p;
}

double range_separation_product(const AlphaParams& p, const PulseSpec& pulse) {
  return pulse.bandwidth * std::abs(p.beta);
}

namespace {

inline double gauss_cos(double omega0, double bw, double x) {
  return std::cos(omega0 * x) * std::exp(-0.25 * bw * bw * x * x);
}

}  // namespace

std::vector<double> aperture_times(const Aperture& a) {
  std::vector<double> s(a.rows());
  for (int j = 0; j < a.rows(); ++j) s[j] = a.s(j);
  return s;
}

Eigen::MatrixXd theoretical_covariance(const AlphaParams& p, const PulseSpec& pulse, const std::vector<double>& s,
                                       double dt, bool with_cross) {
  const int n = static_cast<int>(s.size());
  const double pre = std::sqrt(kPi) / (2.0 * pulse.bandwidth * dt);
  const double w0 = pulse.omega0, bw = pulse.bandwidth;
  Eigen::MatrixXd y(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double ds = s[j] - s[k];
      double v = gauss_cos(w0, bw, p.alpha1 * ds);
      if (p.targets == 2) {
        v += gauss_cos(w0, bw, p.alpha2 * ds);
        if (with_cross) {
          v += gauss_cos(w0, bw, p.alpha1 * s[j] - p.alpha2 * s[k] + p.beta);
          v += gauss_cos(w0, bw, p.alpha1 * s[k] - p.alpha2 * s[j] + p.beta);
        }
      }
      y(j, k) = pre * v;
    }
  return y;
}

std::vector<double> toeplitz_sequence(const AlphaParams& p, const PulseSpec& pulse, double ds, double dt, int count) {
  const double pre = std::sqrt(kPi) / (2.0 * pulse.bandwidth * dt);
  std::vector<double> y(count);
  for (int j = 0; j < count; ++j) {
    double v = gauss_cos(pulse.omega0, pulse.bandwidth, ds * std::abs(p.alpha1) * j);
    if (p.targets == 2) v += gauss_cos(pulse.omega0, pulse.bandwidth, ds * std::abs(p.alpha2) * j);
    y[j] = pre * v;
  }
  return y;
}

std::vector<double> hankel_sequence(const AlphaParams& p, const PulseSpec& pulse, double ds, double dt, int count) {
  const double pre = std::sqrt(kPi) / (2.0 * pulse.bandwidth * dt);
  std::vector<double> h(count);
  for (int j = 0; j < count; ++j)
    h[j] = pre * gauss_cos(pulse.omega0, pulse.bandwidth, ds * std::abs(p.alpha1) * (j + p.zeta));
  return h;
}

Structured build_structured(const std::vector<double>& y, const std::vector<double>& h, int g, int n) {
  if (static_cast<int>(y.size()) < n + 1)
    throw std::length_error("Toeplitz sequence needs " + std::to_string(n + 1) + " entries");
  if (g < 1) throw std::invalid_argument("shift g must be a positive integer");
  const int need = n + g * n + 1;
  if (static_cast<int>(h.size()) < need)
    throw std::length_error("g-Hankel sequence needs " + std::to_string(need) + " entries");
  Structured out;
  out.toeplitz.resize(n + 1, n + 1);
  out.hankel.resize(n + 1, n + 1);
  for (int j = 0; j <= n; ++j)
    for (int l = 0; l <= n; ++l) {
      out.toeplitz(j, l) = y[std::abs(j - l)];
      out.hankel(j, l) = h[j + g * l];
    }
  return out;
}

SymbolSamples symbol(const std::vector<double>& y, int n, int grid) {
  SymbolSamples out;
  const int avail = static_cast<int>(y.size()) - 1;
  int J = std::min(n, avail);
  out.truncation_ok = false;
  for (int j = 1; j <= std::min(n, avail); ++j)
    if (std::abs(y[j]) < 1e-12 * std::abs(y[0])) {
      J = j;
      out.truncation_ok = true;
      break;
    }
  out.truncation = J;
  out.theta.resize(grid);
  out.value.resize(grid);
  for (int i = 0; i < grid; ++i) {
    const double th = -kPi + (2.0 * kPi * (i + 0.5)) / grid;
    double v = y[0];
    for (int j = 1; j <= J; ++j) v += 2.0 * y[j] * std::cos(j * th);
    out.theta[i] = th;
    out.value[i] = v;
  }
  return out;
}

double symbol_rank_fraction(const SymbolSamples& sym, double eps) {
  if (sym.value.empty()) return 0.0;
  const double top = *std::max_element(sym.value.begin(), sym.value.end());
  int count = 0;
  for (double v : sym.value)
    if (v > eps * top) ++count;
  return static_cast<double>(count) / sym.value.size();
}

double szego_rank_estimate(double alpha, const PulseSpec& pulse, double ds, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("threshold must lie in (0, 1)");
  const double f = 2.0 * std::abs(alpha) * pulse.bandwidth * ds * std::sqrt(std::log(1.0 / eps)) / kPi;
  return std::min(f, 1.0);
}

Eigen::VectorXd eigenvalues_desc(const Eigen::MatrixXd& y) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(y, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

int numeric_rank(const Eigen::VectorXd& ev, double eps) {
  if (ev.size() == 0 || !(ev(0) > 0.0)) return 0;
  int r = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > eps * ev(0)) ++r;
  return r;
}

std::vector<RankReport> rank_study(const RankStudyConfig& cfg) {
  if (cfg.mode != "single-stationary" && cfg.mode != "single-mover" && cfg.mode != "two-target")
    throw std::invalid_argument("unknown rank study mode: " + cfg.mode);
  SceneSpec base;
  base.traj = cfg.traj;
  base.rho_o = cfg.rho_o;
  base.pulse = cfg.pulse;
  base.aperture.n = cfg.n;
  base.aperture.ds = cfg.ds;
  const double dt = cfg.dt > 0.0 ? cfg.dt : 1.0 / (5.0 * cfg.pulse.nu0());
  const ViewFrame frame = base.frame();

  std::vector<RankReport> out;
  for (double val : cfg.sweep) {
    SceneSpec sc = base;
    RankReport rep;
    rep.parameter = val;
    rep.n = cfg.n;
    rep.eps = cfg.eps;
    AlphaParams ap;
    if (cfg.mode == "single-mover") {
      Target t;
      t.rho = cfg.rho_o;
      t.u_vec = range_velocity(frame, val);
      sc.targets = {t};
      ap.alpha1 = alpha_of(sc.traj, sc.rho_o, t);
    } else if (cfg.mode == "single-stationary") {
      Target t;
      t.rho = cfg.rho_o + val * Vec3(frame.t_hat.x(), frame.t_hat.y(), 0.0).normalized();
      sc.targets = {t};
      ap.alpha1 = alpha_of(sc.traj, sc.rho_o, t);
    } else {
      Target t1, t2;
      t1.rho = cfg.fixed_target;
      t2.rho = Vec3(cfg.moving_x, val, 0.0);
      sc.targets = {t1, t2};
      ap = two_target_params(sc.traj, sc.rho_o, t1, t2, cfg.ds);
    }
    sc.axis = design_gate(sc, dt);
    rep.alpha = ap.alpha1;
    rep.eigenvalues = eigenvalues_desc(covariance_of_targets(sc, sc.targets));
    rep.computed_rank = numeric_rank(rep.eigenvalues, cfg.eps);
    if (cfg.mode == "two-target") {
      const auto y = toeplitz_sequence(ap, cfg.pulse, cfg.ds, dt, cfg.n + 1);
      rep.sym = symbol(y, cfg.n);
      rep.estimated_fraction = symbol_rank_fraction(rep.sym, cfg.eps);
    } else {
      rep.estimated_fraction = szego_rank_estimate(ap.alpha1, cfg.pulse, cfg.ds, cfg.eps);
      if (cfg.keep_symbol) rep.sym = symbol(toeplitz_sequence(ap, cfg.pulse, cfg.ds, dt, cfg.n + 1), cfg.n);
    }
    rep.estimated_rank = static_cast<int>(std::lround(rep.estimated_fraction * (cfg.n + 1)));
    if (!cfg.keep_symbol && cfg.mode != "two-target") rep.sym = {};
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace sarsep
