// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "sarsep/rpca.hpp"
#include "sarsep/svd.hpp"

using namespace sarsep;

namespace {

struct Instance {
  Eigen::MatrixXd low, sparse;
};

Instance make_instance(int rows, int cols, int rank, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u01;
  Eigen::MatrixXd a(rows, rank), b(rank, cols);
  for (int i = 0; i < a.size(); ++i) a.data()[i] = g(rng) / std::sqrt(static_cast<double>(rows));
  for (int i = 0; i < b.size(); ++i) b.data()[i] = g(rng) / std::sqrt(static_cast<double>(cols));
  Instance in;
  in.low = a * b;
  in.sparse = Eigen::MatrixXd::Zero(rows, cols);
  for (int i = 0; i < in.sparse.size(); ++i)
    if (u01(rng) < density) in.sparse.data()[i] = u01(rng) < 0.5 ? -1.0 : 1.0;
  in.sparse *= 0.05;
  return in;
}

}  // namespace

TEST_CASE("principal component pursuit recovers a small low-rank plus sparse matrix") {
  const Instance in = make_instance(40, 120, 2, 0.05, 4);
  const PcpSolution sol = pcp_solve(in.low + in.sparse);
  CHECK(sol.converged);
  CHECK(sol.feasibility <= 1e-7);
  CHECK((sol.low - in.low).norm() / in.low.norm() <= 1e-5);
  CHECK((sol.sparse - in.sparse).norm() / in.sparse.norm() <= 1e-5);
  CHECK(sol.rank == 2);
  CHECK(pcp_objective(sol.low, sol.sparse, sol.eta) <=
        pcp_objective(in.low + in.sparse, Eigen::MatrixXd::Zero(40, 120), sol.eta) + 1e-9);
}

TEST_CASE("pcp edge cases") {
  const PcpSolution z = pcp_solve(Eigen::MatrixXd::Zero(5, 7));
  CHECK(z.low.isZero());
  CHECK(z.sparse.isZero());
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(3, 3);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(pcp_solve(bad), std::invalid_argument);
}

TEST_CASE("partial SVD agrees with the dense factorization") {
  const Eigen::MatrixXd a = Eigen::MatrixXd(testutil::random_rows(60, 700, 2)) * 0.1 +
                            Eigen::MatrixXd(testutil::random_rows(60, 3, 4)) * Eigen::MatrixXd(testutil::random_rows(3, 700, 5));
  const SvdTriplets full = thin_svd(a);
  const SvdTriplets part = partial_svd(a, 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(part.s(i) == doctest::Approx(full.s(i)).epsilon(1e-10));
    const Eigen::VectorXd r = a * part.v.col(i) - part.s(i) * part.u.col(i);
    CHECK(r.norm() <= 1e-9 * full.s(0));
  }
  const double tau = 0.5 * (full.s(2) + full.s(3));
  const SvtResult dense = singular_value_threshold(a, tau, 3, 512);
  const SvtResult lanczos = singular_value_threshold(a, tau, 1, 10);
  CHECK(dense.kept == 3);
  CHECK(lanczos.kept == 3);
  CHECK((dense.low - lanczos.low).norm() <= 1e-9 * dense.low.norm());
}

TEST_CASE("window tiling covers the axis and cross-fade weights sum to one") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> len(64, 600), n_of(64, 5000);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = n_of(rng);
    WindowLayout w;
    w.length = std::min(n, len(rng));
    w.overlap = w.length / 8;
    const auto spans = tile_windows(n, w);
    CHECK(spans.front().start == 0);
    CHECK(spans.back().start + spans.back().length == n);
    const auto weights = crossfade_weights(n, spans, w.overlap);
    std::vector<double> sum(n, 0.0);
    for (std::size_t k = 0; k < spans.size(); ++k)
      for (int c = 0; c < spans[k].length; ++c) sum[spans[k].start + c] += weights[k][c];
    for (double v : sum) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  WindowLayout bad;
  bad.length = 10;
  bad.overlap = 10;
  CHECK_THROWS_AS(bad.validate(100), std::invalid_argument);
}

TEST_CASE("windowed separation is feasible after concatenation") {
  const SceneSpec s = testutil::gotcha_with({testutil::still(0, 0), testutil::still(3, 0), testutil::mover(0, 0, 10, 5)});
  const TraceMatrix d = simulate_traces(s);
  const WindowLayout w = choose_window(d, s.pulse);
  CHECK(w.length == std::clamp(static_cast<int>(std::lround(16.0 / (s.pulse.bandwidth * d.fast.dt))), 64, d.cols()));
  const SeparationResult r = separate_windowed(d, w);
  CHECK((r.stationary.values + r.moving.values - d.values).norm() <= 1e-7 * d.values.norm());
  CHECK(r.windows.size() >= 2);
}
