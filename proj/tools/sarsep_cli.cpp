// SPDX-License-Identifier: Apache-2.0
// Command-line front end: simulation, separation, motion estimation, imaging
// and rank studies, each writing its artifacts plus manifest.json.
#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sarsep/annihil.hpp"
#include "sarsep/imaging.hpp"
#include "sarsep/io.hpp"
#include "sarsep/kernels.hpp"
#include "sarsep/motionest.hpp"
#include "sarsep/pipeline.hpp"
#include "sarsep/presets.hpp"
#include "sarsep/ranklab.hpp"
#include "sarsep/rpca.hpp"
#include "sarsep/scenesim.hpp"

namespace fs = std::filesystem;
using namespace sarsep;

namespace {

enum Exit { kOk = 0, kValidation = 2, kNumerical = 3, kIo = 4 };

struct Globals {
  std::string config;
  std::string out_dir = ".";
  int threads = 0;
  std::optional<std::uint64_t> seed;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream o;
  o << std::hex << std::setw(16) << std::setfill('0') << v;
  return o.str();
}

class Manifest {
 public:
  Manifest(std::string command, const Globals& g) : command_(std::move(command)), out_dir_(g.out_dir) {
    start_ = std::chrono::steady_clock::now();
  }
  void input(const std::string& p) { inputs_.push_back(p); }
  void output(const std::string& p) {
    outputs_.push_back(p);
    if (fs::exists(p + ".json")) outputs_.push_back(p + ".json");
  }
  json& params() { return params_; }
  void stage(const std::string& name, double seconds) { stages_.push_back({{"stage", name}, {"wall_seconds", seconds}}); }
  void write() {
    const std::string path = (fs::path(out_dir_) / "manifest.json").string();
    json j = {{"command", command_},
              {"inputs", inputs_},
              {"outputs", outputs_},
              {"parameters", params_},
              {"parameter_hash", hex(fnv1a(params_.dump()))},
              {"kernel_isa", isa_name(kernels::active_isa())},
              {"stages", stages_},
              {"wall_seconds", seconds_since(start_)}};
    write_json_file(path, j);
  }
  static double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
  }

 private:
  std::string command_, out_dir_;
  std::vector<std::string> inputs_, outputs_;
  json params_ = json::object();
  json stages_ = json::array();
  std::chrono::steady_clock::time_point start_;
};

std::string out_path(const Globals& g, const std::string& name) {
  if (name.empty()) return name;
  if (fs::path(name).is_absolute()) return name;
  return (fs::path(g.out_dir) / name).string();
}

Vec3 parse_xy(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      v.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: " + part);
    }
  }
  if (v.size() == 2) return Vec3(v[0], v[1], 0.0);
  if (v.size() == 3) return Vec3(v[0], v[1], v[2]);
  throw std::invalid_argument("expected x,y or x,y,z: " + s);
}

// lo:step:hi
SpeedGrid parse_grid(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ':')) {
    try {
      v.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad grid: " + s);
    }
  }
  if (v.size() != 3) throw std::invalid_argument("grid must be lo:step:hi: " + s);
  SpeedGrid g{v[0], v[2], v[1]};
  g.validate();
  return g;
}

// EXxEY:SP or EXxEY:SPX,SPY
ImageGrid parse_image_grid(const std::string& s, const Vec3& center) {
  ImageGrid g;
  g.center = center;
  const auto colon = s.find(':');
  const auto x = s.find('x');
  if (x == std::string::npos || x > colon) throw std::invalid_argument("grid must be EXxEY[:SPACING]: " + s);
  try {
    g.extent_x = std::stod(s.substr(0, x));
    g.extent_y = std::stod(s.substr(x + 1, colon == std::string::npos ? std::string::npos : colon - x - 1));
    if (colon != std::string::npos) {
      const std::string sp = s.substr(colon + 1);
      const auto comma = sp.find(',');
      g.spacing_x = std::stod(sp.substr(0, comma));
      g.spacing_y = comma == std::string::npos ? g.spacing_x : std::stod(sp.substr(comma + 1));
    }
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad grid: " + s);
  }
  g.validate();
  return g;
}

json pulse_json(const PulseSpec& p) { return {{"carrier_hz", p.nu0()}, {"bandwidth_hz", p.bandwidth}}; }

PulseSpec pulse_from(const json& side) {
  PulseSpec p = GotchaDefaults::pulse();
  if (side.contains("pulse")) {
    p.omega0 = 2.0 * kPi * side["pulse"].at("carrier_hz").get<double>();
    p.bandwidth = side["pulse"].at("bandwidth_hz").get<double>();
  }
  p.validate();
  return p;
}

json carry(const json& side) {
  json extra = json::object();
  for (const char* key : {"pulse", "scene_seed"})
    if (side.contains(key)) extra[key] = side[key];
  return extra;
}

SceneSpec scene_with_seed(const std::string& name, const std::optional<std::uint64_t>& seed) {
  json j = load_config(name);
  if (j.contains("kind") && j["kind"] != "scene") throw std::invalid_argument(name + " is not a scene description");
  if (seed) {
    j["seed"] = *seed;
    if (j.contains("random_stationary")) j["random_stationary"]["seed"] = *seed;
  }
  return scene_from_json(j);
}

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
Vec3 vec_from(const json& j) { return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()); }

json motion_to_json(const MotionEstimate& e, const std::vector<double>* g_full) {
  json movers = json::array();
  for (std::size_t i = 0; i < e.peaks.size(); ++i) {
    const VelocityEstimate& c = e.curvature[i];
    movers.push_back({{"range_speed_m_per_s", e.peaks[i].u},
                      {"g_peak", e.peaks[i].score},
                      {"location_m", vec(e.rho_e[i])},
                      {"cross_range_speed_m_per_s", c.u_perp},
                      {"curvature_velocity_m_per_s", vec(c.u_vec)},
                      {"focus_velocity_m_per_s", vec(e.focus_velocity[i])},
                      {"g_perp_grid", c.g_perp_grid},
                      {"g_perp", c.g_perp_curve}});
  }
  json j = {{"range_grid", e.range_grid}, {"g_sparse", e.g_sparse}, {"movers", movers}};
  if (g_full) j["g_full"] = *g_full;
  return j;
}

MotionEstimate motion_from_json(const json& j) {
  MotionEstimate e;
  try {
    e.range_grid = j.at("range_grid").get<std::vector<double>>();
    e.g_sparse = j.at("g_sparse").get<std::vector<double>>();
    for (const json& m : j.at("movers")) {
      e.peaks.push_back({m.at("range_speed_m_per_s").get<double>(), m.at("g_peak").get<double>()});
      e.rho_e.push_back(vec_from(m.at("location_m")));
      e.focus_velocity.push_back(vec_from(m.at("focus_velocity_m_per_s")));
      VelocityEstimate c;
      c.u = e.peaks.back().u;
      c.u_perp = m.at("cross_range_speed_m_per_s").get<double>();
      c.u_vec = vec_from(m.at("curvature_velocity_m_per_s"));
      c.rho_e = e.rho_e.back();
      c.g_perp_grid = m.value("g_perp_grid", std::vector<double>{});
      c.g_perp_curve = m.value("g_perp", std::vector<double>{});
      e.curvature.push_back(std::move(c));
    }
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("bad motion report: ") + ex.what());
  }
  return e;
}

json separation_report(const SeparationResult& r, const WindowLayout& w) {
  json windows = json::array();
  for (const WindowDiag& d : r.windows)
    windows.push_back({{"start", d.span.start},
                       {"length", d.span.length},
                       {"iterations", d.iterations},
                       {"feasibility", d.feasibility},
                       {"rank", d.rank},
                       {"nonzero_fraction", d.nonzero_fraction},
                       {"converged", d.converged}});
  return {{"window_length", w.length},
          {"overlap", w.overlap},
          {"feasibility", r.feasibility},
          {"converged", r.converged},
          {"windows", windows}};
}

void write_rank_csv(const std::string& path, const std::vector<RankReport>& reps) {
  std::vector<double> p, cr, er, n, eps, frac;
  for (const RankReport& r : reps) {
    p.push_back(r.parameter);
    cr.push_back(r.computed_rank);
    er.push_back(r.estimated_rank);
    n.push_back(r.n);
    eps.push_back(r.eps);
    frac.push_back(r.estimated_fraction);
  }
  write_csv(path, {"parameter", "computed_rank", "estimated_rank", "n", "epsilon", "estimated_fraction"},
            {p, cr, er, n, eps, frac});
}

// Shared option bundles.
struct RpcaArgs {
  int window_len = 0;  // 0: automatic
  int overlap = -1;    // -1: window / 8
  std::string eta = "auto";
  double eta_scale = 1.4;
};

struct MotionArgs {
  std::string rho_e = "auto";
  std::string u_grid = "-70:0.25:70";
  std::string perp_grid = "-70:0.5:70";
  int movers = 2;
  double readmit = 2.5;
};

WindowLayout rpca_layout(const TraceMatrix& d, const PulseSpec& pulse, const RpcaArgs& a) {
  WindowLayout w = a.window_len > 0 ? WindowLayout{std::min(a.window_len, d.cols()), 0} : choose_window(d, pulse);
  if (a.window_len > 0) w.overlap = a.overlap >= 0 ? a.overlap : w.length / 8;
  else if (a.overlap >= 0) w.overlap = a.overlap;
  w.validate(d.cols());
  return w;
}

PcpOptions rpca_options(const RpcaArgs& a) {
  PcpOptions o;
  o.eta_scale = a.eta_scale;
  if (a.eta != "auto") {
    try {
      o.eta = std::stod(a.eta);
    } catch (const std::exception&) {
      throw std::invalid_argument("eta must be 'auto' or a number");
    }
    if (!(o.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  }
  return o;
}

MoverPipelineOptions motion_options(const MotionArgs& a) {
  MoverPipelineOptions o;
  o.range_grid = parse_grid(a.u_grid);
  o.cross_grid = parse_grid(a.perp_grid);
  if (a.movers < 1) throw std::invalid_argument("--movers must be positive");
  o.movers = a.movers;
  o.readmit_widths = a.readmit;
  return o;
}

// ---- stage bodies shared by subcommands and `run` ----

struct Ctx {
  const Globals& g;
  Manifest& man;
};

void do_simulate(Ctx c, const std::string& scene_name, bool raw, bool split, const std::string& out) {
  const SceneSpec scene = scene_with_seed(scene_name, c.g.seed);
  std::vector<std::string> warnings;
  scene.validate(&warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const json extra = {{"pulse", pulse_json(scene.pulse)}, {"scene_seed", scene.seed}, {"scene", scene.name}};
  c.man.params()["simulate"] = {{"scene", scene_name}, {"raw", raw}, {"split", split}, {"seed", scene.seed}};
  const std::string scene_path = out_path(c.g, "scene.json");
  write_json_file(scene_path, to_json(scene));
  c.man.output(scene_path);
  if (raw) {
    const FastTimeAxis ax = design_raw_gate(scene, scene.axis.dt);
    const TraceMatrix d = simulate_raw(scene, ax);
    write_trc(out_path(c.g, out), d, extra);
    c.man.output(out_path(c.g, out));
    return;
  }
  auto [st, mv] = simulate_split(scene);
  TraceMatrix d = st;
  d.values += mv.values;
  write_trc(out_path(c.g, out), d, extra);
  c.man.output(out_path(c.g, out));
  if (split) {
    for (const auto& [name, m] : {std::pair<const char*, const TraceMatrix*>{"stationary.trc", &st}, {"moving.trc", &mv}}) {
      write_trc(out_path(c.g, name), *m, extra);
      c.man.output(out_path(c.g, name));
    }
  }
}

void do_rpca(Ctx c, const std::string& in, const RpcaArgs& a, const std::string& low_out, const std::string& sparse_out,
             const std::string& report) {
  json side;
  const TraceMatrix d = read_trc(in, &side);
  c.man.input(in);
  const PulseSpec pulse = pulse_from(side);
  const WindowLayout w = rpca_layout(d, pulse, a);
  const PcpOptions opt = rpca_options(a);
  c.man.params()["rpca"] = {{"window_length", w.length}, {"overlap", w.overlap}, {"eta", a.eta}, {"eta_scale", a.eta_scale}};
  const SeparationResult r = separate_windowed(d, w, opt);
  if (!r.converged) std::cerr << "warning: some PCP windows did not converge\n";
  if (!std::isfinite(r.feasibility)) throw NumericalError("PCP produced non-finite output");
  write_trc(out_path(c.g, low_out), r.stationary, carry(side));
  write_trc(out_path(c.g, sparse_out), r.moving, carry(side));
  c.man.output(out_path(c.g, low_out));
  c.man.output(out_path(c.g, sparse_out));
  if (!report.empty()) {
    write_json_file(out_path(c.g, report), separation_report(r, w));
    c.man.output(out_path(c.g, report));
  }
}

void do_estimate(Ctx c, const std::string& in, const std::string& low, const std::string& full, const MotionArgs& a,
                 const std::string& report) {
  json side;
  const TraceMatrix sparse = read_trc(in, &side);
  c.man.input(in);
  std::optional<TraceMatrix> low_m;
  if (!low.empty()) {
    low_m = read_trc(low);
    c.man.input(low);
  }
  const PulseSpec pulse = pulse_from(side);
  const MoverPipelineOptions opt = motion_options(a);
  std::optional<Vec3> fixed;
  if (a.rho_e != "auto") fixed = parse_xy(a.rho_e);
  c.man.params()["estimate-motion"] = {{"rho_e", a.rho_e}, {"u_grid", a.u_grid}, {"perp_grid", a.perp_grid},
                                       {"movers", a.movers}, {"readmit_widths", a.readmit}};
  const MotionEstimate est = estimate_motion(sparse, low_m ? &*low_m : nullptr, pulse, opt, fixed ? &*fixed : nullptr);
  std::vector<double> g_full;
  if (!full.empty()) {
    g_full = objective_g_curve(read_trc(full), sparse.rho_o, est.range_grid);
    c.man.input(full);
  }
  if (est.peaks.empty()) std::cerr << "warning: no range-speed peak above the prominence threshold\n";
  write_json_file(out_path(c.g, report), motion_to_json(est, full.empty() ? nullptr : &g_full));
  c.man.output(out_path(c.g, report));
}

void do_separate(Ctx c, const std::string& in, const std::string& low, const std::string& motion, double readmit,
                 const std::string& prefix, const std::string& report) {
  json side;
  const TraceMatrix sparse = read_trc(in, &side);
  c.man.input(in);
  std::optional<TraceMatrix> low_m;
  if (!low.empty()) {
    low_m = read_trc(low);
    c.man.input(low);
  }
  const MotionEstimate est = motion_from_json(read_json_file(motion));
  c.man.input(motion);
  MoverPipelineOptions opt;
  opt.readmit_widths = readmit;
  c.man.params()["separate-movers"] = {{"readmit_widths", readmit}};
  TraceMatrix residual;
  const auto reps = separate_estimated(sparse, low_m ? &*low_m : nullptr, est, pulse_from(side), opt, &residual);
  json movers = json::array();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const std::string p = out_path(c.g, prefix + std::to_string(i + 1) + ".trc");
    write_trc(p, reps[i].trace, carry(side));
    c.man.output(p);
    movers.push_back({{"trace", fs::path(p).filename().string()},
                      {"velocity_m_per_s", vec(reps[i].used)},
                      {"location_m", vec(reps[i].location.rho)},
                      {"compensated_peak", reps[i].compensated_peak},
                      {"uncompensated_peak", reps[i].uncompensated_peak},
                      {"unfocused", reps[i].location.unfocused}});
  }
  const std::string rp = out_path(c.g, "residual.trc");
  write_trc(rp, residual, carry(side));
  c.man.output(rp);
  write_json_file(out_path(c.g, report), {{"movers", movers}});
  c.man.output(out_path(c.g, report));
}

void do_image(Ctx c, const std::string& in, const std::string& grid, const std::string& center, const std::string& u,
              const std::string& out, double floor_db) {
  json side;
  const TraceMatrix d = read_trc(in, &side);
  c.man.input(in);
  const ImageGrid g = parse_image_grid(grid, parse_xy(center));
  const Vec3 u_vec = parse_xy(u);
  c.man.params()["image:" + out] = {{"grid", grid}, {"center", center}, {"u", u}};
  const SarImage img = image_compensated(d, g, pulse_from(side), u_vec);
  if (img.out_of_gate > 0) std::cerr << "warning: " << img.out_of_gate << " samples fell outside the gate\n";
  write_image(out_path(c.g, out), img);
  c.man.output(out_path(c.g, out));
  const std::string pgm = out_path(c.g, fs::path(out).replace_extension(".pgm").string());
  write_pgm(pgm, img.envelope, floor_db);
  c.man.output(pgm);
}

void do_rank(Ctx c, const std::vector<RankStudyConfig>& studies, const std::string& out) {
  json params = json::array();
  for (std::size_t i = 0; i < studies.size(); ++i) {
    const RankStudyConfig& cfg = studies[i];
    params.push_back({{"mode", cfg.mode}, {"n", cfg.n}, {"epsilon", cfg.eps}, {"sweep", cfg.sweep}});
    std::string path = out_path(c.g, out);
    if (studies.size() > 1) {
      const fs::path p(path);
      path = (p.parent_path() / (p.stem().string() + "-" + std::to_string(i + 1) + p.extension().string())).string();
    }
    write_rank_csv(path, rank_study(cfg));
    c.man.output(path);
  }
  c.man.params()["rank"] = params;
}

// ---- run ----

const std::map<std::string, int>& stage_levels() {
  static const std::map<std::string, int> levels = {{"simulate", 0},       {"annihilate", 1}, {"rpca", 1},
                                                    {"estimate-motion", 2}, {"separate-movers", 3},
                                                    {"image", 4},          {"rank", 5}};
  return levels;
}

void validate_stages(const std::vector<std::string>& stages, const json& params) {
  if (stages.empty()) throw std::invalid_argument("experiment has no stages");
  int last = -1;
  std::map<std::string, bool> seen;
  for (const std::string& s : stages) {
    const auto it = stage_levels().find(s);
    if (it == stage_levels().end()) throw std::invalid_argument("unknown stage: " + s);
    if (seen[s]) throw std::invalid_argument("stage listed twice: " + s);
    if (it->second < last) throw std::invalid_argument("stage out of order: " + s);
    last = it->second;
    seen[s] = true;
  }
  const bool sim = seen["simulate"];
  if (!sim && (seen["rpca"] || seen["annihilate"] || seen["image"])) {
    const std::string input = params.value("input", "");
    if (input.empty()) throw std::invalid_argument("without a simulate stage, params.input must name a trace file");
    if (!fs::exists(input) || !fs::exists(input + ".json")) throw IoError("input trace not found: " + input);
  }
  if (seen["estimate-motion"] && !seen["rpca"]) throw std::invalid_argument("estimate-motion needs an rpca stage");
  if (seen["separate-movers"] && !seen["estimate-motion"])
    throw std::invalid_argument("separate-movers needs an estimate-motion stage");
}

int do_run(const Globals& g0) {
  if (g0.config.empty()) throw std::invalid_argument("run needs --config");
  const json cfg = load_config(g0.config);
  if (cfg.value("kind", "experiment") != "experiment") throw std::invalid_argument(g0.config + " is not an experiment");
  Globals g = g0;
  if (g.out_dir == "." && cfg.contains("out_dir")) g.out_dir = cfg["out_dir"].get<std::string>();
  if (!g.seed && cfg.contains("seed")) g.seed = cfg["seed"].get<std::uint64_t>();
  const std::vector<std::string> stages = cfg.at("stages").get<std::vector<std::string>>();
  const json params = cfg.value("params", json::object());
  validate_stages(stages, params);
  fs::create_directories(g.out_dir);

  Manifest man("run", g);
  man.params()["config"] = cfg;
  const Ctx c{g, man};
  const std::string data = stages.front() == "simulate" ? out_path(g, "data.trc") : params.value("input", "");
  try {
    for (const std::string& s : stages) {
      const auto t0 = std::chrono::steady_clock::now();
      const json p = params.value(s, json::object());
      if (s == "simulate") {
        do_simulate(c, cfg.value("scene", "scene1"), false, true, "data.trc");
      } else if (s == "annihilate") {
        AnnihilationPlan plan;
        if (p.contains("plan")) plan = plan_from_json(p["plan"]);
        else plan.stages.push_back({});
        const TraceMatrix q = annihilate(read_trc(data), plan);
        write_trc(out_path(g, "filtered.trc"), q, {{"plan", to_json(plan)}});
        man.output(out_path(g, "filtered.trc"));
      } else if (s == "rpca") {
        RpcaArgs a;
        a.window_len = p.value("window_length", 3700);
        a.overlap = p.value("overlap", -1);
        a.eta_scale = p.value("eta_scale", 1.4);
        do_rpca(c, data, a, "low.trc", "sparse.trc", "rpca.json");
      } else if (s == "estimate-motion") {
        MotionArgs a;
        a.movers = p.value("movers", 2);
        a.u_grid = p.value("u_grid", a.u_grid);
        a.perp_grid = p.value("perp_grid", a.perp_grid);
        a.readmit = p.value("readmit_widths", a.readmit);
        do_estimate(c, out_path(g, "sparse.trc"), out_path(g, "low.trc"), data, a, "motion.json");
      } else if (s == "separate-movers") {
        do_separate(c, out_path(g, "sparse.trc"), out_path(g, "low.trc"), out_path(g, "motion.json"),
                    p.value("readmit_widths", 2.5), "mover-", "movers.json");
      } else if (s == "image") {
        const std::string grid = p.value("grid", "60x60:0.12,0.6");
        do_image(c, data, grid, "0,0", "0,0", "image.bin", -60.0);
        if (fs::exists(out_path(g, "movers.json"))) {
          const json mv = read_json_file(out_path(g, "movers.json"));
          for (std::size_t i = 0; i < mv["movers"].size(); ++i) {
            const json& m = mv["movers"][i];
            const Vec3 u = vec_from(m["velocity_m_per_s"]);
            const Vec3 at = vec_from(m["location_m"]);
            std::ostringstream us, cs;
            us << std::setprecision(17) << u.x() << "," << u.y();
            cs << std::setprecision(17) << at.x() << "," << at.y();
            do_image(c, out_path(g, m["trace"].get<std::string>()), p.value("mover_grid", "20x40:0.12,0.6"), cs.str(),
                     us.str(), "image-mover-" + std::to_string(i + 1) + ".bin", -60.0);
          }
        }
      } else if (s == "rank") {
        do_rank(c, rank_studies_from_json(p), "rank.csv");
      }
      man.stage(s, Manifest::seconds_since(t0));
    }
  } catch (const std::exception&) {
    man.write();
    throw;
  }
  man.write();
  return kOk;
}

// ---- export ----

int do_export(const Globals& g, const std::string& artifact, const std::string& kind, const std::string& out,
              double floor_db) {
  static const std::vector<std::string> kinds = {"trace-pgm", "image-pgm", "g-csv", "gperp-csv"};
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
    throw std::invalid_argument("unknown export kind: " + kind);
  Manifest man("export", g);
  man.input(artifact);
  man.params()["export"] = {{"kind", kind}, {"floor_db", floor_db}};
  const std::string target = out_path(g, out);
  if (kind == "trace-pgm") {
    const TraceMatrix d = read_trc(artifact);
    write_pgm(target, envelope(d.values), floor_db);
    man.output(target);
  } else if (kind == "image-pgm") {
    const json side = read_json_file(artifact + ".json");
    const int nx = side.at("nx").get<int>(), ny = side.at("ny").get<int>();
    RowMat env(ny, nx);
    std::ifstream f(artifact, std::ios::binary);
    if (!f) throw IoError("cannot open: " + artifact);
    f.read(reinterpret_cast<char*>(env.data()), static_cast<std::streamsize>(sizeof(double) * env.size()));
    if (!f) throw IoError("short image file: " + artifact);
    write_pgm(target, env, floor_db);
    man.output(target);
  } else if (kind == "g-csv") {
    const json m = read_json_file(artifact);
    const auto u = m.at("range_grid").get<std::vector<double>>();
    std::vector<std::string> head = {"u", "g_sparse"};
    std::vector<std::vector<double>> cols = {u, m.at("g_sparse").get<std::vector<double>>()};
    if (m.contains("g_full")) {
      head.push_back("g_full");
      cols.push_back(m["g_full"].get<std::vector<double>>());
    }
    write_csv(target, head, cols);
    man.output(target);
  } else {
    const json m = read_json_file(artifact);
    std::vector<std::string> head = {"u_perp"};
    std::vector<std::vector<double>> cols;
    for (std::size_t i = 0; i < m.at("movers").size(); ++i) {
      const json& mv = m["movers"][i];
      if (cols.empty()) cols.push_back(mv.at("g_perp_grid").get<std::vector<double>>());
      head.push_back("g_perp_" + std::to_string(i + 1));
      cols.push_back(mv.at("g_perp").get<std::vector<double>>());
    }
    if (cols.empty()) throw std::invalid_argument("motion report has no movers");
    write_csv(target, head, cols);
    man.output(target);
  }
  man.write();
  return kOk;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const GateError& e) {
    std::cerr << "gate error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const std::length_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const json::exception& e) {
    std::cerr << "invalid json: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-target separation for synthetic aperture radar traces"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "preset name or JSON file");
  app.add_option("--out-dir", g.out_dir, "directory for outputs and manifest.json");
  app.add_option("--threads", g.threads, "worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  auto* seed_opt = app.add_option("--seed", seed, "override scene seeds");

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate range-compressed traces for a scene");
  std::string sim_scene, sim_out = "data.trc";
  bool sim_raw = false, sim_split = false;
  sim->add_option("--scene", sim_scene, "scene preset or JSON (default: --config, else scene1)");
  sim->add_option("--out", sim_out, "output trace file");
  sim->add_flag("--raw", sim_raw, "emit uncompressed echoes over an absolute gate");
  sim->add_flag("--split", sim_split, "also write stationary.trc and moving.trc");

  // compress
  auto* comp = app.add_subcommand("compress", "shift raw echoes to the reference point");
  std::string comp_in, comp_out;
  comp->add_option("in", comp_in)->required();
  comp->add_option("out", comp_out)->required();

  // annihilate
  auto* ann = app.add_subcommand("annihilate", "apply an annihilation plan");
  std::string ann_plan, ann_in, ann_out;
  ann->add_option("--plan", ann_plan, "plan JSON")->required();
  ann->add_option("in", ann_in)->required();
  ann->add_option("out", ann_out)->required();

  // rpca
  auto* rp = app.add_subcommand("rpca", "windowed low-rank plus sparse separation");
  std::string rp_in, rp_low = "low.trc", rp_sparse = "sparse.trc", rp_report = "rpca.json";
  RpcaArgs rpa;
  rp->add_option("in", rp_in)->required();
  rp->add_option("--window-len", rpa.window_len, "fast-time samples per window (0 = automatic)");
  rp->add_option("--overlap", rpa.overlap, "overlap in samples (default window/8)");
  rp->add_option("--eta", rpa.eta, "sparsity weight or 'auto'");
  rp->add_option("--eta-scale", rpa.eta_scale, "scale of the automatic weight");
  rp->add_option("--out-low", rp_low);
  rp->add_option("--out-sparse", rp_sparse);
  rp->add_option("--report", rp_report);

  // estimate-motion
  auto* em = app.add_subcommand("estimate-motion", "range and cross-range speeds of movers");
  std::string em_in, em_low, em_full, em_report = "motion.json";
  MotionArgs ma;
  em->add_option("in", em_in, "sparse part")->required();
  em->add_option("--low", em_low, "low-rank part, readmitted along mover tracks");
  em->add_option("--full", em_full, "unseparated traces, for the g(u) reference curve");
  em->add_option("--rho-e", ma.rho_e, "'auto' or x,y in meters");
  em->add_option("--u-grid", ma.u_grid, "range-speed grid lo:step:hi");
  em->add_option("--perp-grid", ma.perp_grid, "cross-range-speed grid lo:step:hi");
  em->add_option("--movers", ma.movers, "maximum number of movers");
  em->add_option("--readmit", ma.readmit, "pulse widths readmitted around each track (0 = off)");
  em->add_option("--report", em_report);

  // separate-movers
  auto* sm = app.add_subcommand("separate-movers", "split the sparse part into per-mover traces");
  std::string sm_in, sm_low, sm_motion, sm_prefix = "mover-", sm_report = "movers.json";
  double sm_readmit = 2.5;
  sm->add_option("in", sm_in, "sparse part")->required();
  sm->add_option("--low", sm_low);
  sm->add_option("--motion", sm_motion, "report from estimate-motion (default: <out-dir>/motion.json)");
  sm->add_option("--readmit", sm_readmit);
  sm->add_option("--prefix", sm_prefix);
  sm->add_option("--report", sm_report);

  // image
  auto* im = app.add_subcommand("image", "backprojection image, optionally motion compensated");
  std::string im_in, im_grid = "50x50:0.12,0.6", im_center = "0,0", im_u = "0,0", im_out = "image.bin";
  double im_floor = -60.0;
  im->add_option("in", im_in)->required();
  im->add_option("--grid", im_grid, "EXxEY:SPACING or EXxEY:SX,SY in meters");
  im->add_option("--center", im_center, "grid center x,y");
  im->add_option("--u", im_u, "compensation velocity ux,uy");
  im->add_option("--out", im_out);
  im->add_option("--floor-db", im_floor);

  // rank
  auto* rk = app.add_subcommand("rank", "numeric rank against the symbol estimate");
  std::string rk_mode = "single-mover", rk_sweep, rk_out = "rank.csv";
  int rk_n = 116;
  double rk_eps = 0.01;
  rk->add_option("--mode", rk_mode)->check(CLI::IsMember({"single-stationary", "single-mover", "two-target"}));
  rk->add_option("--sweep", rk_sweep, "lo:step:hi or comma list");
  rk->add_option("--n", rk_n);
  rk->add_option("--eps", rk_eps);
  rk->add_option("--out", rk_out);

  // run
  auto* run = app.add_subcommand("run", "execute an experiment description");

  // export
  auto* ex = app.add_subcommand("export", "plot-ready CSV or PGM from an artifact");
  std::string ex_art, ex_kind, ex_out;
  double ex_floor = -60.0;
  ex->add_option("artifact", ex_art)->required();
  ex->add_option("--kind", ex_kind, "trace-pgm | image-pgm | g-csv | gperp-csv")->required();
  ex->add_option("--out", ex_out)->required();
  ex->add_option("--floor-db", ex_floor);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  if (*seed_opt) g.seed = seed;
  if (g.threads > 0) omp_set_num_threads(g.threads);

  return guarded([&]() -> int {
    fs::create_directories(g.out_dir);
    if (*run) return do_run(g);
    if (*ex) return do_export(g, ex_art, ex_kind, ex_out, ex_floor);

    Manifest man(app.get_subcommands().front()->get_name(), g);
    const Ctx c{g, man};
    try {
      if (*sim) {
        std::string scene = sim_scene;
        if (scene.empty()) scene = g.config.empty() ? "scene1" : g.config;
        do_simulate(c, scene, sim_raw, sim_split, sim_out);
      } else if (*comp) {
        json side;
        const TraceMatrix raw = read_trc(comp_in, &side);
        man.input(comp_in);
        write_trc(out_path(g, comp_out), range_compress(raw), carry(side));
        man.output(out_path(g, comp_out));
      } else if (*ann) {
        const AnnihilationPlan plan = plan_from_json(read_json_file(ann_plan));
        json side;
        const TraceMatrix d = read_trc(ann_in, &side);
        man.input(ann_plan);
        man.input(ann_in);
        man.params()["plan"] = to_json(plan);
        json extra = carry(side);
        extra["plan"] = to_json(plan);
        write_trc(out_path(g, ann_out), annihilate(d, plan), extra);
        man.output(out_path(g, ann_out));
      } else if (*rp) {
        do_rpca(c, rp_in, rpa, rp_low, rp_sparse, rp_report);
      } else if (*em) {
        do_estimate(c, em_in, em_low, em_full, ma, em_report);
      } else if (*sm) {
        do_separate(c, sm_in, sm_low, sm_motion.empty() ? out_path(g, "motion.json") : sm_motion, sm_readmit, sm_prefix, sm_report);
      } else if (*im) {
        do_image(c, im_in, im_grid, im_center, im_u, im_out, im_floor);
      } else if (*rk) {
        std::vector<RankStudyConfig> studies;
        if (!g.config.empty() && rk_sweep.empty()) {
          studies = rank_studies_from_json(load_config(g.config));
        } else {
          json j = {{"mode", rk_mode}, {"n", rk_n}, {"epsilon", rk_eps}};
          if (rk_sweep.empty()) throw std::invalid_argument("rank needs --sweep or a rank --config");
          if (rk_sweep.find(':') != std::string::npos) {
            const SpeedGrid s = parse_grid(rk_sweep);
            j["sweep"] = {{"lo", s.lo}, {"hi", s.hi}, {"step", s.step}};
          } else {
            std::vector<double> v;
            std::stringstream ss(rk_sweep);
            std::string part;
            while (std::getline(ss, part, ',')) v.push_back(std::stod(part));
            j["sweep"] = v;
          }
          studies.push_back(rank_config_from_json(j, GotchaDefaults::trajectory()));
        }
        do_rank(c, studies, rk_out);
      }
    } catch (const std::exception&) {
      man.write();
      throw;
    }
    man.write();
    return kOk;
  });
}
