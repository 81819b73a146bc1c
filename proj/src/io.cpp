// SPDX-License-Identifier: Apache-2.0
#include "sarsep/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sarsep {

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument(std::string(what) + " must be a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

template <class T>
T need(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("bad type for field: ") + key);
  }
}

static_assert(std::endian::native == std::endian::little, "trace files are little-endian");

}  // namespace

json to_json(const Trajectory& t) {
  if (t.kind == Trajectory::Kind::linear)
    return {{"kind", "linear"}, {"origin_m", vec(t.origin)}, {"tangent", vec(t.tangent)}, {"speed_m_per_s", t.speed}};
  return {{"kind", "circular-arc"},
          {"center_m", vec(t.center)},
          {"radius_m", t.radius},
          {"height_m", t.height},
          {"speed_m_per_s", t.platform_speed()},
          {"phase0_rad", t.phase0}};
}

Trajectory trajectory_from_json(const json& j) {
  const std::string kind = need<std::string>(j, "kind");
  Trajectory t;
  if (kind == "linear") {
    t = Trajectory::linear(vec_from(need<json>(j, "origin_m"), "origin_m"), vec_from(need<json>(j, "tangent"), "tangent"),
                           need<double>(j, "speed_m_per_s"));
  } else if (kind == "circular-arc") {
    t = Trajectory::circular(j.contains("center_m") ? vec_from(j["center_m"], "center_m") : Vec3::Zero(),
                             need<double>(j, "radius_m"), need<double>(j, "height_m"), need<double>(j, "speed_m_per_s"),
                             j.value("phase0_rad", 0.0));
  } else {
    throw std::invalid_argument("unknown trajectory kind: " + kind);
  }
  t.validate();
  return t;
}

json to_json(const SceneSpec& s) {
  json targets = json::array();
  for (const Target& q : s.targets)
    targets.push_back({{"position_m", vec(q.rho)}, {"velocity_m_per_s", vec(q.u_vec)}, {"reflectivity", q.sigma}});
  return {{"name", s.name},
          {"trajectory", to_json(s.traj)},
          {"aperture", {{"n", s.aperture.n}, {"delta_s_seconds", s.aperture.ds}}},
          {"reference_point_m", vec(s.rho_o)},
          {"pulse", {{"carrier_hz", s.pulse.nu0()}, {"bandwidth_hz", s.pulse.bandwidth}}},
          {"fast_time", {{"samples", s.axis.m}, {"delta_t_seconds", s.axis.dt}, {"center_seconds", s.axis.t_center}}},
          {"imaging_radius_m", s.imaging_radius},
          {"seed", s.seed},
          {"targets", targets}};
}

SceneSpec scene_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("scene must be a JSON object");
  SceneSpec s;
  s.name = j.value("name", std::string("scene"));
  s.traj = trajectory_from_json(need<json>(j, "trajectory"));
  const json ap = need<json>(j, "aperture");
  s.aperture.n = need<int>(ap, "n");
  s.aperture.ds = need<double>(ap, "delta_s_seconds");
  s.aperture.validate();
  s.rho_o = j.contains("reference_point_m") ? vec_from(j["reference_point_m"], "reference_point_m") : Vec3::Zero();
  if (j.contains("pulse")) {
    s.pulse.omega0 = 2.0 * kPi * j["pulse"].value("carrier_hz", 9.6e9);
    s.pulse.bandwidth = j["pulse"].value("bandwidth_hz", 622e6);
  }
  s.pulse.validate();
  s.imaging_radius = j.value("imaging_radius_m", 60.0);
  s.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("random_stationary")) {
    const json& r = j["random_stationary"];
    const auto extra = random_stationary(need<int>(r, "count"), need<double>(r, "half_extent_m"),
                                         r.value("seed", s.seed), s.rho_o);
    s.targets.insert(s.targets.end(), extra.begin(), extra.end());
  }
  if (j.contains("targets")) {
    for (const json& t : j["targets"]) {
      Target q;
      q.rho = vec_from(need<json>(t, "position_m"), "position_m");
      if (t.contains("velocity_m_per_s")) q.u_vec = vec_from(t["velocity_m_per_s"], "velocity_m_per_s");
      else if (t.contains("speed_m_per_s") && t.contains("heading")) {
        const Vec3 h = vec_from(t["heading"], "heading").normalized();
        q.u_vec = t["speed_m_per_s"].get<double>() * h;
      }
      q.sigma = t.value("reflectivity", 1.0);
      s.targets.push_back(q);
    }
  }
  const json ft = j.value("fast_time", json::object());
  const double dt = ft.contains("delta_t_seconds") && ft["delta_t_seconds"].is_number()
                        ? ft["delta_t_seconds"].get<double>()
                        : 1.0 / (5.0 * s.pulse.nu0());
  if (ft.contains("samples") && ft["samples"].is_number_integer() && ft["samples"].get<int>() > 0) {
    s.axis.m = ft["samples"].get<int>();
    s.axis.dt = dt;
    s.axis.t_center = ft.value("center_seconds", 0.0);
  } else {
    s.axis = design_gate(s, dt, ft.value("pad_widths", 6.0));
  }
  s.validate();
  return s;
}

json to_json(const AnnihilationPlan& p) {
  json st = json::array();
  for (const auto& s : p.stages)
    st.push_back({{"rho_e_m", vec(s.rho_e)}, {"velocity_m_per_s", vec(s.u_e)}, {"order", s.order}});
  return {{"stages", st}};
}

AnnihilationPlan plan_from_json(const json& j) {
  AnnihilationPlan p;
  for (const json& s : need<json>(j, "stages")) {
    AnnihilationStage st;
    st.rho_e = vec_from(need<json>(s, "rho_e_m"), "rho_e_m");
    if (s.contains("velocity_m_per_s")) st.u_e = vec_from(s["velocity_m_per_s"], "velocity_m_per_s");
    st.order = s.value("order", 1);
    p.stages.push_back(st);
  }
  p.validate();
  return p;
}

void write_trc(const std::string& path, const TraceMatrix& d, const json& extra) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(d.values.data()), static_cast<std::streamsize>(sizeof(double) * d.values.size()));
  if (!f) throw IoError("write failed: " + path);
  json side = {{"n", d.slow.n},
               {"m", d.fast.m},
               {"delta_s_seconds", d.slow.ds},
               {"delta_t_seconds", d.fast.dt},
               {"gate_center_seconds", d.fast.t_center},
               {"gate_width_seconds", 2.0 * d.fast.half_width()},
               {"trajectory", to_json(d.traj)},
               {"reference_point_m", vec(d.rho_o)},
               {"provenance", provenance_name(d.tag)},
               {"valid_rows", {d.row_lo, d.row_hi}},
               {"layout", "float64 little-endian row-major (n+1) x (m+1)"}};
  for (auto it = extra.begin(); it != extra.end(); ++it) side[it.key()] = it.value();
  write_json_file(path + ".json", side);
}

TraceMatrix read_trc(const std::string& path, json* sidecar) {
  const json side = read_json_file(path + ".json");
  if (sidecar) *sidecar = side;
  TraceMatrix d;
  try {
    d.slow.n = side.at("n").get<int>();
    d.slow.ds = side.at("delta_s_seconds").get<double>();
    d.fast.m = side.at("m").get<int>();
    d.fast.dt = side.at("delta_t_seconds").get<double>();
    d.fast.t_center = side.at("gate_center_seconds").get<double>();
    d.traj = trajectory_from_json(side.at("trajectory"));
    d.rho_o = vec_from(side.at("reference_point_m"), "reference_point_m");
    d.tag = provenance_from(side.at("provenance").get<std::string>());
    d.row_lo = side.contains("valid_rows") ? side["valid_rows"][0].get<int>() : 0;
    d.row_hi = side.contains("valid_rows") ? side["valid_rows"][1].get<int>() : d.slow.rows();
  } catch (const json::exception& e) {
    throw std::invalid_argument("bad trace sidecar " + path + ".json: " + e.what());
  }
  d.values.resize(d.slow.rows(), d.fast.cols());
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  f.read(reinterpret_cast<char*>(d.values.data()), static_cast<std::streamsize>(sizeof(double) * d.values.size()));
  if (f.gcount() != static_cast<std::streamsize>(sizeof(double) * d.values.size()))
    throw IoError("trace file shorter than its sidecar says: " + path);
  d.check_consistent();
  return d;
}

void write_image(const std::string& path, const SarImage& img) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(img.envelope.data()),
          static_cast<std::streamsize>(sizeof(double) * img.envelope.size()));
  f.write(reinterpret_cast<const char*>(img.raw.data()), static_cast<std::streamsize>(sizeof(double) * img.raw.size()));
  if (!f) throw IoError("write failed: " + path);
  const ImageGrid& g = img.grid;
  write_json_file(path + ".json", {{"nx", g.nx()},
                                   {"ny", g.ny()},
                                   {"center_m", vec(g.center)},
                                   {"extent_m", {g.extent_x, g.extent_y}},
                                   {"spacing_m", {g.spacing_x, g.spacing_y}},
                                   {"compensated", img.compensated},
                                   {"velocity_m_per_s", vec(img.u_vec)},
                                   {"out_of_gate_samples", img.out_of_gate},
                                   {"layout", "envelope then raw, float64 little-endian row-major ny x nx"}});
}

void write_pgm(const std::string& path, const RowMat& values, double floor_db) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  const double top = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  f << "P5\n" << values.cols() << " " << values.rows() << "\n65535\n";
  for (int r = 0; r < values.rows(); ++r)
    for (int c = 0; c < values.cols(); ++c) {
      const double a = std::abs(values(r, c));
      double db = (top > 0.0 && a > 0.0) ? 20.0 * std::log10(a / top) : floor_db;
      db = std::clamp(db, floor_db, 0.0);
      const auto v = static_cast<std::uint16_t>(std::lround(65535.0 * (db - floor_db) / -floor_db));
      const unsigned char be[2] = {static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v & 0xFF)};
      f.write(reinterpret_cast<const char*>(be), 2);
    }
  if (!f) throw IoError("write failed: " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw std::invalid_argument("csv header and column counts differ");
  for (const auto& c : columns)
    if (c.size() != columns[0].size()) throw std::invalid_argument("csv columns differ in length");
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
  f << "\n" << std::setprecision(12);
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) f << (c ? "," : "") << columns[c][r];
    f << "\n";
  }
  if (!f) throw IoError("write failed: " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << j.dump(2) << "\n";
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace sarsep
