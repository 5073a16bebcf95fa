#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "sweep/belief_map.hpp"
#include "sweep/sensor_model.hpp"
#include "sweep/sweep_planner.hpp"
#include "sweep/trajectory.hpp"
#include "sweep/types.hpp"

namespace sweep {

enum class Strategy { adaptive, predefined_sweep, no_sweep };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);  // throws std::invalid_argument

struct GimbalState {
  double yaw = 0.0;        // relative to vehicle heading
  int direction = 1;       // +1 sweeping toward psi2
  SweepBounds bounds{};
};

struct SimParams {
  double dt = 0.1;                   // s
  double speed = 20.0;               // m/s
  double gimbal_rate = deg2rad(30.0);  // rad/s
  double meas_period = 0.5;          // s between measurement ticks
  double sample_period = 0.5;        // s between recorded series rows
  double altitude = 100.0;           // m
  bool sampled_measurements = false; // draw stochastic detections instead of
                                     // applying the deterministic expected update
};

// everything a step needs besides the mutable state
struct SimContext {
  const Trajectory& plan;
  SensorModel model;
  SweepPlannerConfig sweep;
  SimParams sim;
};

struct ReplanRecord {
  double t = 0.0;
  SweepBounds bounds{};
  SweepDiagnostics diag{};
};

struct SimState {
  double time = 0.0;
  double arc = 0.0;          // distance travelled along the plan
  std::size_t wp = 0;        // next waypoint index
  UavState uav{};
  GimbalState gimbal{};
  BeliefGrid grid;
  std::vector<char> truth_mask;  // per-cell target presence, sampled-measurement mode
  std::vector<ReplanRecord> replans;
  std::mt19937_64 rng;
  double meas_accum = 0.0;
  double replan_accum = 0.0;
  bool replanned_once = false;
  int bound_violations = 0;

  explicit SimState(BeliefGrid g) : grid(std::move(g)) {}
};

struct SeriesRow {
  double t = 0.0;
  double entropy_bits = 0.0;
  double pct_reduction = 0.0;
  double psi_c_deg = 0.0;
  double psi1_deg = 0.0;
  double psi2_deg = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct RunResult {
  std::vector<SeriesRow> series;
  std::vector<ReplanRecord> replans;
  double h0 = 0.0;
  double final_entropy = 0.0;
  double final_pct = 0.0;
  double duration = 0.0;
  double rate_per_s = 0.0;   // final_pct / duration
  int bound_violations = 0;
};

// Advances the state by dt: replans the sweep bounds when due (adaptive only),
// moves the vehicle along the plan at constant speed, sweeps the gimbal with
// reflection at the bounds (slewing back when a replan strands it outside),
// and fires measurement ticks that update every cell whose center lies in the
// instantaneous footprint.
void step(SimState& state, double dt, Strategy strategy, const SimContext& ctx);

// Runs until the plan's arc length is exhausted. The grid passed in is the
// prior; each run works on its own copy. seed drives sampled measurements and
// ground-truth placement only.
RunResult run_scenario(const BeliefGrid& prior, const Trajectory& plan, Strategy strategy,
                       const SensorModel& model, const SweepPlannerConfig& sweep_cfg,
                       const SimParams& sim, std::uint64_t seed);

// columnar series: t entropy_bits pct_reduction psi_c_deg psi1_deg psi2_deg x y
void write_series(std::ostream& os, const std::vector<SeriesRow>& series);
void write_replan_log(std::ostream& os, const std::vector<ReplanRecord>& replans);

}  // namespace sweep
