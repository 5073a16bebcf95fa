#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "sweep/belief_map.hpp"
#include "sweep/geometry.hpp"
#include "sweep/sensor_model.hpp"
#include "sweep/trajectory.hpp"
#include "sweep/types.hpp"

namespace sweep {

struct SweepPlannerConfig {
  double psi_min = deg2rad(-30.0);      // gimbal yaw limits
  double psi_max = deg2rad(30.0);
  double t_future = 5.0;                // s, look-ahead added to one full sweep
  int n_layers = 8;                     // scan layers per polygon side
  double threshold_entropy = 0.1;       // bits, cell qualifies at or above this
  double confidence_threshold = 0.5;    // assumed-measurement switch point
  double replan_period = 1.0;           // s
  double heading_tol = deg2rad(5.0);    // per-corner turn detection
};

// time for one full sweep across the gimbal yaw range
double max_sweep_time(const SweepPlannerConfig& cfg, double gimbal_rate);

// State reached after travelling speed * (t_max_sweep + t_future) along the
// plan from current_pos; wp is the next waypoint index. Returns the final plan
// state when the plan ends first. Throws std::invalid_argument on an empty
// plan, std::out_of_range on a bad wp.
UavState future_position(const Trajectory& plan, std::size_t wp, const UavState& current_pos,
                         double speed, double t_max_sweep, double t_future);

// true when any corner within horizon_dist of arc length past plan[wp] bends
// more than heading_tol
bool is_turning(const Trajectory& plan, std::size_t wp, double horizon_dist, double heading_tol);

// First cell in scan order whose assumed-measurement entropy drop meets
// cfg.threshold_entropy; range is measured from the vehicle's 3-D position to
// the cell center. Out-of-bounds cells are skipped.
std::optional<CellIndex> find_high_info_cell(std::span<const CellIndex> cells,
                                             const BeliefGrid& grid, const SensorModel& model,
                                             const UavState& uav, const SweepPlannerConfig& cfg);

struct BoundaryHit {
  CellIndex cell;
  int layer = -1;  // 0 = outermost
};

// Scans one side of the horizon polygon layer by layer from the outside in and
// returns the first qualifying cell with its layer index; empty when no layer
// holds one or the polygon is degenerate.
std::optional<BoundaryHit> find_boundary_high_info_cell(
    const FootprintTrapezoid& f_current, const FootprintTrapezoid& f_future,
    const BeliefGrid& grid, const SensorModel& model, const UavState& uav, int n_layers,
    bool is_upper, const SweepPlannerConfig& cfg);

// gimbal yaw that centers the camera on the cell, clamped to the yaw limits
double bounds_from_cell(const UavState& uav, CellIndex cell, const BeliefGrid& grid,
                        const SweepPlannerConfig& cfg);

struct SweepDiagnostics {
  bool turning = false;
  std::optional<BoundaryHit> upper;
  std::optional<BoundaryHit> lower;
};

// One replanning step: full bounds while turning or on any internal failure;
// otherwise each side tightens to its boundary high-information cell, staying
// at the limit when that side has none. Bounds are always ordered and inside
// [psi_min, psi_max].
SweepBounds plan_sweep(const Trajectory& plan, std::size_t wp, const UavState& uav,
                       const BeliefGrid& grid, const SensorModel& model,
                       const SweepPlannerConfig& cfg, double gimbal_rate, double speed,
                       SweepDiagnostics* diag = nullptr);

}  // namespace sweep
