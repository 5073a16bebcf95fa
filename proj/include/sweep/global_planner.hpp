#pragma once

#include <cstdint>

#include "sweep/belief_map.hpp"
#include "sweep/sensor_model.hpp"
#include "sweep/trajectory.hpp"
#include "sweep/types.hpp"

namespace sweep {

struct PlannerParams {
  double budget = 5000.0;            // m, hard cap on trajectory cost
  int sample_count = 400;            // tree expansion attempts
  double rewire_radius = 300.0;      // m, parent candidate search radius
  double min_turn_spacing = 200.0;   // m, minimum straight segment length
  double max_segment_len = 400.0;    // m
  double max_heading_change = deg2rad(60.0);  // per vertex
  bool widened_fov = true;           // score with the full swept footprint
  double psi_min = deg2rad(-30.0);   // sweep extent used when widened
  double psi_max = deg2rad(30.0);
  double confidence_threshold = 0.5;
  double sample_spacing = 25.0;      // m between scored sensor poses
  double uniform_sample_prob = 0.3;  // vs. entropy-weighted cell sampling
};

// Expected entropy harvested along T: sensor poses are taken every
// params.sample_spacing of arc length (starting at 0); every cell whose center
// falls in the coverage region gets the assumed-measurement update on a
// scratch copy of the grid, applied only when it lowers entropy. widened
// selects the full swept trapezoid instead of the forward-pointing footprint.
double trajectory_information(const Trajectory& traj, const BeliefGrid& grid,
                              const SensorModel& model, bool widened,
                              const PlannerParams& params);

// Budget-constrained informative tree search over straight segments. Grows a
// tree from start by information-biased random sampling and returns the
// highest-information root-to-node branch. Deterministic for a given seed;
// returns the single-point trajectory when no expansion fits the budget.
Trajectory plan_global(const UavState& start, const BeliefGrid& grid, const SensorModel& model,
                       const PlannerParams& params, std::uint64_t seed);

}  // namespace sweep
