// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "sarsep/presets.hpp"
#include "sarsep/scenesim.hpp"

namespace testutil {

using namespace sarsep;

// GOTCHA scene with the given targets and a gate fitted to them.
inline SceneSpec gotcha_with(std::vector<Target> targets, double pad = 6.0) {
  SceneSpec s = GotchaDefaults::scene();
  s.targets = std::move(targets);
  s.axis = design_gate(s, 1.0 / (5.0 * GotchaDefaults::carrier_hz), pad);
  s.validate();
  return s;
}

inline Target still(double x, double y, double sigma = 1.0) {
  Target t;
  t.rho = Vec3(x, y, 0.0);
  t.sigma = sigma;
  return t;
}

inline Target mover(double x, double y, double ux, double uy, double sigma = 1.0) {
  Target t = still(x, y, sigma);
  t.u_vec = Vec3(ux, uy, 0.0);
  return t;
}

inline RowMat random_rows(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  RowMat m(rows, cols);
  for (int i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

}  // namespace testutil
