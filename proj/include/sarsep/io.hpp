// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "sarsep/annihil.hpp"
#include "sarsep/imaging.hpp"
#include "sarsep/scenesim.hpp"

namespace sarsep {

using json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json to_json(const Trajectory& t);
Trajectory trajectory_from_json(const json& j);
json to_json(const SceneSpec& s);
// Throws std::invalid_argument on schema violations.
SceneSpec scene_from_json(const json& j);
json to_json(const AnnihilationPlan& p);
AnnihilationPlan plan_from_json(const json& j);

// `<base>` gets little-endian float64 row-major values, `<base>.json` the axes.
void write_trc(const std::string& path, const TraceMatrix& d, const json& extra = json::object());
TraceMatrix read_trc(const std::string& path, json* sidecar = nullptr);

void write_image(const std::string& path, const SarImage& img);

// 16-bit binary PGM of 20 log10(|v| / max) clipped at floor_db.
void write_pgm(const std::string& path, const RowMat& values, double floor_db = -60.0);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace sarsep
