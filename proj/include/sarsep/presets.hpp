// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sarsep/io.hpp"
#include "sarsep/ranklab.hpp"
#include "sarsep/scenesim.hpp"

namespace sarsep {

// Circular X-band collection used by every built-in preset. Read-only.
struct GotchaDefaults {
  static constexpr double carrier_hz = 9.6e9;
  static constexpr double bandwidth_hz = 622e6;
  static constexpr double radius_m = 7100.0;
  static constexpr double height_m = 7300.0;
  static constexpr double speed_m_per_s = 70.0;
  static constexpr int pulses = 117;
  static constexpr double delta_s_seconds = 0.015;
  static constexpr double max_target_speed = 28.0;

  static Trajectory trajectory();
  static PulseSpec pulse();
  static Aperture aperture();
  // Empty scene with the default gate sampling rate 5 nu0.
  static SceneSpec scene();
};

std::vector<std::string> preset_names();
// Name of a shipped preset or a path to a JSON file.
json load_config(const std::string& name_or_path);
SceneSpec load_scene(const std::string& name_or_path);

RankStudyConfig rank_config_from_json(const json& j, const Trajectory& fallback);
std::vector<RankStudyConfig> rank_studies_from_json(const json& j);

}  // namespace sarsep
