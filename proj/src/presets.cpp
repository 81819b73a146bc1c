// SPDX-License-Identifier: Apache-2.0
#include "sarsep/presets.hpp"

#include <filesystem>

namespace sarsep {

Trajectory GotchaDefaults::trajectory() {
  return Trajectory::circular(Vec3::Zero(), radius_m, height_m, speed_m_per_s, 0.0);
}

PulseSpec GotchaDefaults::pulse() {
  PulseSpec p;
  p.omega0 = 2.0 * kPi * carrier_hz;
  p.bandwidth = bandwidth_hz;
  return p;
}

Aperture GotchaDefaults::aperture() {
  Aperture a;
  a.n = pulses - 1;
  a.ds = delta_s_seconds;
  return a;
}

SceneSpec GotchaDefaults::scene() {
  SceneSpec s;
  s.name = "gotcha";
  s.traj = trajectory();
  s.aperture = aperture();
  s.pulse = pulse();
  s.axis = design_gate(s, 1.0 / (5.0 * carrier_hz));
  return s;
}

std::vector<std::string> preset_names() {
  return {"scene1", "example1", "example2", "linear-pass", "rank-single", "rank-aperture", "rank-pair", "run-scene1"};
}

json load_config(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (fs::exists(name_or_path)) return read_json_file(name_or_path);
  const fs::path shipped = fs::path(SARSEP_PRESET_DIR) / (name_or_path + ".json");
  if (fs::exists(shipped)) return read_json_file(shipped.string());
  throw IoError("no such preset or file: " + name_or_path);
}

SceneSpec load_scene(const std::string& name_or_path) {
  const json j = load_config(name_or_path);
  if (j.value("kind", std::string("scene")) != "scene")
    throw std::invalid_argument(name_or_path + " is not a scene description");
  return scene_from_json(j);
}

namespace {

std::vector<double> sweep_from(const json& s) {
  if (s.is_array()) return s.get<std::vector<double>>();
  const double lo = s.at("lo").get<double>(), hi = s.at("hi").get<double>(), step = s.at("step").get<double>();
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad sweep range");
  std::vector<double> out;
  for (int i = 0; lo + i * step <= hi + 1e-9 * step; ++i) out.push_back(lo + i * step);
  return out;
}

}  // namespace

RankStudyConfig rank_config_from_json(const json& j, const Trajectory& fallback) {
  RankStudyConfig c;
  try {
    c.mode = j.at("mode").get<std::string>();
    if (c.mode != "single-stationary" && c.mode != "single-mover" && c.mode != "two-target")
      throw std::invalid_argument("unknown rank mode: " + c.mode);
    c.sweep = sweep_from(j.at("sweep"));
    c.n = j.value("n", 116);
    c.eps = j.value("epsilon", 0.01);
    c.ds = j.value("delta_s_seconds", GotchaDefaults::delta_s_seconds);
    c.dt = j.value("delta_t_seconds", 0.0);
    c.traj = j.contains("trajectory") ? trajectory_from_json(j["trajectory"]) : fallback;
    c.pulse = GotchaDefaults::pulse();
    if (j.contains("fixed_target_m")) {
      const auto v = j["fixed_target_m"].get<std::vector<double>>();
      if (v.size() != 3) throw std::invalid_argument("fixed_target_m must be a 3-vector");
      c.fixed_target = Vec3(v[0], v[1], v[2]);
    }
    c.moving_x = j.value("moving_x_m", c.moving_x);
    c.keep_symbol = j.value("keep_symbol", false);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad rank study: ") + e.what());
  }
  if (c.n < 2 || !(c.eps > 0.0 && c.eps < 1.0)) throw std::invalid_argument("rank study needs n >= 2 and 0 < epsilon < 1");
  return c;
}

std::vector<RankStudyConfig> rank_studies_from_json(const json& j) {
  const Trajectory fallback =
      j.contains("trajectory") ? trajectory_from_json(j["trajectory"]) : GotchaDefaults::trajectory();
  std::vector<RankStudyConfig> out;
  if (!j.contains("studies")) throw std::invalid_argument("rank config has no studies");
  for (const json& s : j["studies"]) out.push_back(rank_config_from_json(s, fallback));
  return out;
}

}  // namespace sarsep
