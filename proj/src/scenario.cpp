#include "sweep/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

namespace sweep {

namespace {

// splitmix64: decorrelates derived seeds from the master seed
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename T>
T fetch(const YAML::Node& sec, const std::string& section, const std::string& key, T fallback) {
  if (!sec.IsDefined() || sec.IsNull()) return fallback;
  const YAML::Node n = sec[key];
  if (!n.IsDefined() || n.IsNull()) return fallback;
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(section + "." + key, "cannot parse value");
  }
}

void reject_unknown(const YAML::Node& sec, const std::string& section,
                    const std::set<std::string>& allowed) {
  if (!sec.IsDefined() || sec.IsNull()) return;
  if (!sec.IsMap()) throw ConfigError(section, "expected a mapping");
  for (const auto& kv : sec) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError(section + "." + key, "unknown key");
  }
}

int grid_dim(double size, double cell, const char* field) {
  const double n = size / cell;
  const long rounded = std::lround(n);
  if (rounded < 1 || std::abs(n - rounded) > 1e-6) {
    throw ConfigError(field, "must be a positive multiple of map.cell_size");
  }
  return static_cast<int>(rounded);
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw ConfigError(path, std::string("cannot load config: ") + e.what());
  }
  reject_unknown(root, "config",
                 {"seed", "map", "sensor", "start", "global", "sweep", "sim"});

  ScenarioConfig cfg;
  cfg.seed = fetch<std::uint64_t>(root, "config", "seed", cfg.seed);

  {
    const YAML::Node m = root["map"];
    reject_unknown(m, "map",
                   {"size_x", "size_y", "cell_size", "background_p", "patches", "prior_file"});
    cfg.map.size_x = fetch(m, "map", "size_x", cfg.map.size_x);
    cfg.map.size_y = fetch(m, "map", "size_y", cfg.map.size_y);
    cfg.map.cell_size = fetch(m, "map", "cell_size", cfg.map.cell_size);
    cfg.map.patches.background_p = fetch(m, "map", "background_p", cfg.map.patches.background_p);
    if (m && m["prior_file"] && !m["prior_file"].IsNull()) {
      cfg.map.prior_file = fetch<std::string>(m, "map", "prior_file", "");
    }
    const YAML::Node p = m.IsDefined() ? m["patches"] : YAML::Node();
    reject_unknown(p, "map.patches",
                   {"count_min", "count_max", "cells_min", "cells_max", "p_lo", "p_hi"});
    auto& pp = cfg.map.patches;
    pp.patches_min = fetch(p, "map.patches", "count_min", pp.patches_min);
    pp.patches_max = fetch(p, "map.patches", "count_max", pp.patches_max);
    pp.patch_cells_min = fetch(p, "map.patches", "cells_min", pp.patch_cells_min);
    pp.patch_cells_max = fetch(p, "map.patches", "cells_max", pp.patch_cells_max);
    pp.patch_p_lo = fetch(p, "map.patches", "p_lo", pp.patch_p_lo);
    pp.patch_p_hi = fetch(p, "map.patches", "p_hi", pp.patch_p_hi);
  }

  {
    const YAML::Node s = root["sensor"];
    reject_unknown(s, "sensor",
                   {"alpha", "beta", "p_peak", "fov_h_deg", "fov_v_deg", "pitch_deg"});
    cfg.sensor.alpha = fetch(s, "sensor", "alpha", cfg.sensor.alpha);
    cfg.sensor.beta = fetch(s, "sensor", "beta", cfg.sensor.beta);
    cfg.sensor.p_peak = fetch(s, "sensor", "p_peak", cfg.sensor.p_peak);
    cfg.sensor.fov_h = deg2rad(fetch(s, "sensor", "fov_h_deg", rad2deg(cfg.sensor.fov_h)));
    cfg.sensor.fov_v = deg2rad(fetch(s, "sensor", "fov_v_deg", rad2deg(cfg.sensor.fov_v)));
    cfg.sensor.pitch = deg2rad(fetch(s, "sensor", "pitch_deg", rad2deg(cfg.sensor.pitch)));
  }

  {
    const YAML::Node s = root["start"];
    reject_unknown(s, "start", {"randomize", "margin", "x", "y", "psi_deg"});
    cfg.start.randomize = fetch(s, "start", "randomize", cfg.start.randomize);
    cfg.start.margin = fetch(s, "start", "margin", cfg.start.margin);
    cfg.start.state.x = fetch(s, "start", "x", cfg.start.state.x);
    cfg.start.state.y = fetch(s, "start", "y", cfg.start.state.y);
    cfg.start.state.psi = deg2rad(fetch(s, "start", "psi_deg", rad2deg(cfg.start.state.psi)));
  }

  {
    const YAML::Node g = root["global"];
    reject_unknown(g, "global",
                   {"budget", "sample_count", "rewire_radius", "min_turn_spacing",
                    "max_segment_len", "max_heading_change_deg", "widened_fov", "sample_spacing",
                    "uniform_sample_prob"});
    auto& gp = cfg.global;
    gp.budget = fetch(g, "global", "budget", gp.budget);
    gp.sample_count = fetch(g, "global", "sample_count", gp.sample_count);
    gp.rewire_radius = fetch(g, "global", "rewire_radius", gp.rewire_radius);
    gp.min_turn_spacing = fetch(g, "global", "min_turn_spacing", gp.min_turn_spacing);
    gp.max_segment_len = fetch(g, "global", "max_segment_len", gp.max_segment_len);
    gp.max_heading_change = deg2rad(
        fetch(g, "global", "max_heading_change_deg", rad2deg(gp.max_heading_change)));
    gp.widened_fov = fetch(g, "global", "widened_fov", gp.widened_fov);
    gp.sample_spacing = fetch(g, "global", "sample_spacing", gp.sample_spacing);
    gp.uniform_sample_prob = fetch(g, "global", "uniform_sample_prob", gp.uniform_sample_prob);
  }

  {
    const YAML::Node s = root["sweep"];
    reject_unknown(s, "sweep",
                   {"psi_min_deg", "psi_max_deg", "t_future", "n_layers", "threshold_entropy",
                    "confidence_threshold", "replan_period", "heading_tol_deg"});
    auto& sw = cfg.sweep;
    sw.psi_min = deg2rad(fetch(s, "sweep", "psi_min_deg", rad2deg(sw.psi_min)));
    sw.psi_max = deg2rad(fetch(s, "sweep", "psi_max_deg", rad2deg(sw.psi_max)));
    sw.t_future = fetch(s, "sweep", "t_future", sw.t_future);
    sw.n_layers = fetch(s, "sweep", "n_layers", sw.n_layers);
    sw.threshold_entropy = fetch(s, "sweep", "threshold_entropy", sw.threshold_entropy);
    sw.confidence_threshold = fetch(s, "sweep", "confidence_threshold", sw.confidence_threshold);
    sw.replan_period = fetch(s, "sweep", "replan_period", sw.replan_period);
    sw.heading_tol = deg2rad(fetch(s, "sweep", "heading_tol_deg", rad2deg(sw.heading_tol)));
  }

  {
    const YAML::Node s = root["sim"];
    reject_unknown(s, "sim",
                   {"dt", "speed", "gimbal_rate_deg", "meas_period", "sample_period", "altitude",
                    "sampled_measurements"});
    auto& sm = cfg.sim;
    sm.dt = fetch(s, "sim", "dt", sm.dt);
    sm.speed = fetch(s, "sim", "speed", sm.speed);
    sm.gimbal_rate = deg2rad(fetch(s, "sim", "gimbal_rate_deg", rad2deg(sm.gimbal_rate)));
    sm.meas_period = fetch(s, "sim", "meas_period", sm.meas_period);
    sm.sample_period = fetch(s, "sim", "sample_period", sm.sample_period);
    sm.altitude = fetch(s, "sim", "altitude", sm.altitude);
    sm.sampled_measurements = fetch(s, "sim", "sampled_measurements", sm.sampled_measurements);
  }

  // the local planner assumes the same sweep extent and decision threshold
  // as the gimbal it plans for
  cfg.global.psi_min = cfg.sweep.psi_min;
  cfg.global.psi_max = cfg.sweep.psi_max;
  cfg.global.confidence_threshold = cfg.sweep.confidence_threshold;

  validate(cfg);
  return cfg;
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;

  out << YAML::Key << "map" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "size_x" << YAML::Value << cfg.map.size_x;
  out << YAML::Key << "size_y" << YAML::Value << cfg.map.size_y;
  out << YAML::Key << "cell_size" << YAML::Value << cfg.map.cell_size;
  out << YAML::Key << "background_p" << YAML::Value << cfg.map.patches.background_p;
  if (cfg.map.prior_file) {
    out << YAML::Key << "prior_file" << YAML::Value << *cfg.map.prior_file;
  }
  out << YAML::Key << "patches" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "count_min" << YAML::Value << cfg.map.patches.patches_min;
  out << YAML::Key << "count_max" << YAML::Value << cfg.map.patches.patches_max;
  out << YAML::Key << "cells_min" << YAML::Value << cfg.map.patches.patch_cells_min;
  out << YAML::Key << "cells_max" << YAML::Value << cfg.map.patches.patch_cells_max;
  out << YAML::Key << "p_lo" << YAML::Value << cfg.map.patches.patch_p_lo;
  out << YAML::Key << "p_hi" << YAML::Value << cfg.map.patches.patch_p_hi;
  out << YAML::EndMap << YAML::EndMap;

  out << YAML::Key << "sensor" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "alpha" << YAML::Value << cfg.sensor.alpha;
  out << YAML::Key << "beta" << YAML::Value << cfg.sensor.beta;
  out << YAML::Key << "p_peak" << YAML::Value << cfg.sensor.p_peak;
  out << YAML::Key << "fov_h_deg" << YAML::Value << rad2deg(cfg.sensor.fov_h);
  out << YAML::Key << "fov_v_deg" << YAML::Value << rad2deg(cfg.sensor.fov_v);
  out << YAML::Key << "pitch_deg" << YAML::Value << rad2deg(cfg.sensor.pitch);
  out << YAML::EndMap;

  out << YAML::Key << "start" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "randomize" << YAML::Value << cfg.start.randomize;
  out << YAML::Key << "margin" << YAML::Value << cfg.start.margin;
  out << YAML::Key << "x" << YAML::Value << cfg.start.state.x;
  out << YAML::Key << "y" << YAML::Value << cfg.start.state.y;
  out << YAML::Key << "psi_deg" << YAML::Value << rad2deg(cfg.start.state.psi);
  out << YAML::EndMap;

  out << YAML::Key << "global" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "budget" << YAML::Value << cfg.global.budget;
  out << YAML::Key << "sample_count" << YAML::Value << cfg.global.sample_count;
  out << YAML::Key << "rewire_radius" << YAML::Value << cfg.global.rewire_radius;
  out << YAML::Key << "min_turn_spacing" << YAML::Value << cfg.global.min_turn_spacing;
  out << YAML::Key << "max_segment_len" << YAML::Value << cfg.global.max_segment_len;
  out << YAML::Key << "max_heading_change_deg" << YAML::Value
      << rad2deg(cfg.global.max_heading_change);
  out << YAML::Key << "widened_fov" << YAML::Value << cfg.global.widened_fov;
  out << YAML::Key << "sample_spacing" << YAML::Value << cfg.global.sample_spacing;
  out << YAML::Key << "uniform_sample_prob" << YAML::Value << cfg.global.uniform_sample_prob;
  out << YAML::EndMap;

  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "psi_min_deg" << YAML::Value << rad2deg(cfg.sweep.psi_min);
  out << YAML::Key << "psi_max_deg" << YAML::Value << rad2deg(cfg.sweep.psi_max);
  out << YAML::Key << "t_future" << YAML::Value << cfg.sweep.t_future;
  out << YAML::Key << "n_layers" << YAML::Value << cfg.sweep.n_layers;
  out << YAML::Key << "threshold_entropy" << YAML::Value << cfg.sweep.threshold_entropy;
  out << YAML::Key << "confidence_threshold" << YAML::Value << cfg.sweep.confidence_threshold;
  out << YAML::Key << "replan_period" << YAML::Value << cfg.sweep.replan_period;
  out << YAML::Key << "heading_tol_deg" << YAML::Value << rad2deg(cfg.sweep.heading_tol);
  out << YAML::EndMap;

  out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value << cfg.sim.dt;
  out << YAML::Key << "speed" << YAML::Value << cfg.sim.speed;
  out << YAML::Key << "gimbal_rate_deg" << YAML::Value << rad2deg(cfg.sim.gimbal_rate);
  out << YAML::Key << "meas_period" << YAML::Value << cfg.sim.meas_period;
  out << YAML::Key << "sample_period" << YAML::Value << cfg.sim.sample_period;
  out << YAML::Key << "altitude" << YAML::Value << cfg.sim.altitude;
  out << YAML::Key << "sampled_measurements" << YAML::Value << cfg.sim.sampled_measurements;
  out << YAML::EndMap << YAML::EndMap;

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write config: " + path);
  f << out.c_str() << "\n";
  if (!f) throw std::runtime_error("write failed: " + path);
}

void validate(const ScenarioConfig& cfg) {
  if (!(cfg.map.cell_size > 0.0)) throw ConfigError("map.cell_size", "must be positive");
  grid_dim(cfg.map.size_x, cfg.map.cell_size, "map.size_x");
  grid_dim(cfg.map.size_y, cfg.map.cell_size, "map.size_y");
  const auto& pp = cfg.map.patches;
  if (!(pp.background_p >= 0.0 && pp.background_p <= 1.0)) {
    throw ConfigError("map.background_p", "must be a probability");
  }
  if (pp.patches_min < 0 || pp.patches_max < pp.patches_min) {
    throw ConfigError("map.patches.count_max", "range inverted or negative");
  }
  if (pp.patch_cells_min < 1 || pp.patch_cells_max < pp.patch_cells_min) {
    throw ConfigError("map.patches.cells_max", "range inverted or below 1");
  }
  if (!(pp.patch_p_lo >= 0.0 && pp.patch_p_hi <= 1.0 && pp.patch_p_lo <= pp.patch_p_hi)) {
    throw ConfigError("map.patches.p_lo", "patch probability range invalid");
  }

  try {
    cfg.sensor.validate();
  } catch (const std::exception& e) {
    throw ConfigError("sensor", e.what());
  }

  if (!(cfg.start.margin >= 0.0 && cfg.start.margin < 0.5)) {
    throw ConfigError("start.margin", "must be in [0, 0.5)");
  }

  if (!(cfg.global.budget >= 0.0)) throw ConfigError("global.budget", "must be non-negative");
  if (cfg.global.sample_count < 0) throw ConfigError("global.sample_count", "must be >= 0");
  if (!(cfg.global.min_turn_spacing > 0.0)) {
    throw ConfigError("global.min_turn_spacing", "must be positive");
  }
  if (!(cfg.global.max_segment_len >= cfg.global.min_turn_spacing)) {
    throw ConfigError("global.max_segment_len", "shorter than min_turn_spacing");
  }
  if (!(cfg.global.sample_spacing > 0.0)) {
    throw ConfigError("global.sample_spacing", "must be positive");
  }
  if (!(cfg.global.uniform_sample_prob >= 0.0 && cfg.global.uniform_sample_prob <= 1.0)) {
    throw ConfigError("global.uniform_sample_prob", "must be a probability");
  }

  if (!(cfg.sweep.psi_max > cfg.sweep.psi_min)) {
    throw ConfigError("sweep.psi_max_deg", "must exceed psi_min_deg");
  }
  if (cfg.sweep.n_layers < 1) throw ConfigError("sweep.n_layers", "must be >= 1");
  if (!(cfg.sweep.threshold_entropy >= 0.0)) {
    throw ConfigError("sweep.threshold_entropy", "must be non-negative");
  }
  if (!(cfg.sweep.confidence_threshold >= 0.0 && cfg.sweep.confidence_threshold <= 1.0)) {
    throw ConfigError("sweep.confidence_threshold", "must be a probability");
  }
  if (!(cfg.sweep.replan_period > 0.0)) {
    throw ConfigError("sweep.replan_period", "must be positive");
  }
  if (!(cfg.sweep.t_future >= 0.0)) throw ConfigError("sweep.t_future", "must be non-negative");

  if (!(cfg.sim.dt > 0.0)) throw ConfigError("sim.dt", "must be positive");
  if (!(cfg.sim.speed > 0.0)) throw ConfigError("sim.speed", "must be positive");
  if (!(cfg.sim.gimbal_rate > 0.0)) throw ConfigError("sim.gimbal_rate_deg", "must be positive");
  if (!(cfg.sim.meas_period > 0.0)) throw ConfigError("sim.meas_period", "must be positive");
  if (!(cfg.sim.sample_period > 0.0)) throw ConfigError("sim.sample_period", "must be positive");
  if (!(cfg.sim.altitude > 0.0)) throw ConfigError("sim.altitude", "must be positive");
  if (!(cfg.sim.altitude < cfg.sensor.beta)) {
    throw ConfigError("sim.altitude", "at or above the sensor max range: nothing is visible");
  }
}

BeliefGrid build_grid(const ScenarioConfig& cfg) {
  const int n_cols = grid_dim(cfg.map.size_x, cfg.map.cell_size, "map.size_x");
  const int n_rows = grid_dim(cfg.map.size_y, cfg.map.cell_size, "map.size_y");
  if (cfg.map.prior_file) {
    BeliefGrid g = BeliefGrid::load_file(*cfg.map.prior_file);
    if (g.n_cols() != n_cols || g.n_rows() != n_rows) {
      throw ConfigError("map.prior_file", "grid dimensions disagree with map size");
    }
    return g;
  }
  return BeliefGrid::random_patches({0.0, 0.0}, cfg.map.cell_size, n_cols, n_rows,
                                    cfg.map.patches, cfg.seed);
}

UavState start_state(const ScenarioConfig& cfg) {
  UavState s = cfg.start.state;
  s.z = cfg.sim.altitude;
  if (!cfg.start.randomize) return s;
  // separate stream from the map so start and patches stay independent
  std::mt19937_64 rng(mix64(cfg.seed ^ 0x5747415254535452ULL));
  std::uniform_real_distribution<double> ux(cfg.start.margin * cfg.map.size_x,
                                            (1.0 - cfg.start.margin) * cfg.map.size_x);
  std::uniform_real_distribution<double> uy(cfg.start.margin * cfg.map.size_y,
                                            (1.0 - cfg.start.margin) * cfg.map.size_y);
  std::uniform_real_distribution<double> upsi(-kPi, kPi);
  s.x = ux(rng);
  s.y = uy(rng);
  s.psi = upsi(rng);
  return s;
}

ScenarioConfig scenario_from_seed(const ScenarioConfig& base, std::uint64_t seed) {
  ScenarioConfig cfg = base;
  cfg.seed = seed;
  return cfg;
}

std::vector<ScenarioConfig> generate_scenarios(const ScenarioConfig& base, int n,
                                               std::uint64_t master_seed) {
  if (n < 0) throw std::invalid_argument("generate_scenarios: negative count");
  std::vector<ScenarioConfig> out;
  out.reserve(n);
  std::uint64_t state = master_seed;
  for (int i = 0; i < n; ++i) {
    state += 0x9e3779b97f4a7c15ULL;
    out.push_back(scenario_from_seed(base, mix64(state)));
  }
  return out;
}

}  // namespace sweep
