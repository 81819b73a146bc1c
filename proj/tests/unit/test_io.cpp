// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "sarsep/io.hpp"

using namespace sarsep;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "sarsep_io_test";
  fs::create_directories(p);
  return p / name;
}

}  // namespace

TEST_CASE("trace files round trip bit for bit") {
  const SceneSpec s = gotcha_with({still(1, 2), mover(0, 0, 2, 3)});
  TraceMatrix d = simulate_traces(s);
  d.row_lo = 2;
  const std::string path = scratch("d.trc").string();
  write_trc(path, d, {{"note", "x"}});
  json side;
  const TraceMatrix back = read_trc(path, &side);
  CHECK(back.values == d.values);
  CHECK(back.fast.dt == d.fast.dt);
  CHECK(back.fast.m == d.fast.m);
  CHECK(back.row_lo == 2);
  CHECK(back.tag == d.tag);
  CHECK(side["note"] == "x");
  CHECK(back.traj.radius == d.traj.radius);
}

TEST_CASE("scene JSON round trip") {
  const SceneSpec s = gotcha_with({still(1, 2), mover(0, 0, 2, 3, 0.5)});
  const SceneSpec back = scene_from_json(to_json(s));
  REQUIRE(back.targets.size() == 2);
  CHECK(back.targets[1].u_vec == s.targets[1].u_vec);
  CHECK(back.targets[1].sigma == 0.5);
  CHECK(back.axis.m == s.axis.m);
  CHECK(back.axis.dt == s.axis.dt);
  CHECK(rel_error(simulate_traces(back).values, simulate_traces(s).values) == 0.0);
}

TEST_CASE("schema errors") {
  json j = to_json(gotcha_with({still(0, 0)}));
  j["trajectory"]["kind"] = "spiral";
  CHECK_THROWS_AS(scene_from_json(j), std::invalid_argument);
  json t = to_json(gotcha_with({still(0, 0)}));
  t["targets"][0]["position_m"] = json::array({1, 2});
  CHECK_THROWS_AS(scene_from_json(t), std::invalid_argument);
  CHECK_THROWS_AS(plan_from_json(json{{"stages", json::array({{{"order", 3}}})}}), std::invalid_argument);
}

TEST_CASE("plan JSON round trip") {
  AnnihilationPlan p;
  p.stages.push_back({Vec3(1, 2, 0), Vec3(3, 0, 0), 2});
  const AnnihilationPlan q = plan_from_json(to_json(p));
  REQUIRE(q.stages.size() == 1);
  CHECK(q.stages[0].rho_e == p.stages[0].rho_e);
  CHECK(q.stages[0].u_e == p.stages[0].u_e);
  CHECK(q.stages[0].order == 2);
}

TEST_CASE("image exports") {
  RowMat m(3, 4);
  m << 1, 0.5, 0, 0.1, 0, 0, 0, 0, 0, 0, 0, 0.001;
  const std::string pgm = scratch("m.pgm").string();
  write_pgm(pgm, m, -40.0);
  std::ifstream in(pgm, std::ios::binary);
  std::string magic;
  int w, h, maxv;
  in >> magic >> w >> h >> maxv;
  CHECK(magic == "P5");
  CHECK(w == 4);
  CHECK(h == 3);
  CHECK(maxv == 65535);
  in.get();
  unsigned char px[2];
  in.read(reinterpret_cast<char*>(px), 2);
  CHECK(px[0] == 0xff);
  CHECK(px[1] == 0xff);
  CHECK(fs::file_size(pgm) == 13 + 3 * 4 * 2);

  const std::string csv = scratch("c.csv").string();
  write_csv(csv, {"a", "b"}, {{1, 2}, {3, 4}});
  std::ifstream c(csv);
  std::string line;
  std::getline(c, line);
  CHECK(line == "a,b");
  CHECK_THROWS_AS(write_csv(csv, {"a"}, {{1}, {2}}), std::invalid_argument);
}

TEST_CASE("missing files raise IoError") {
  CHECK_THROWS_AS(read_trc("/nonexistent/dir/x.trc"), IoError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/x.json"), IoError);
  CHECK_THROWS_AS(write_json_file("/nonexistent/dir/x.json", json::object()), IoError);
}

TEST_CASE("shipped presets load") {
  for (const std::string& name : preset_names()) {
    const json j = load_config(name);
    CHECK(j.contains("kind"));
    if (j["kind"] == "scene") CHECK_NOTHROW(load_scene(name));
    if (j["kind"] == "rank") CHECK(!rank_studies_from_json(j).empty());
  }
  const SceneSpec s1 = load_scene("scene1");
  CHECK(s1.targets.size() == 22);
  CHECK(s1.axis.m == 13124);
  CHECK_THROWS_AS(load_config("no-such-preset"), IoError);
}
