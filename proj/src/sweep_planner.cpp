#include "sweep/sweep_planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sweep/geometry.hpp"

namespace sweep {

double max_sweep_time(const SweepPlannerConfig& cfg, double gimbal_rate) {
  if (!(gimbal_rate > 0.0)) throw std::invalid_argument("gimbal rate must be positive");
  if (!(cfg.psi_max >= cfg.psi_min)) throw std::invalid_argument("gimbal limits inverted");
  return (cfg.psi_max - cfg.psi_min) / gimbal_rate;
}

UavState future_position(const Trajectory& plan, std::size_t wp, const UavState& current,
                         double speed, double t_max_sweep, double t_future) {
  if (plan.waypoints.empty()) throw std::invalid_argument("future_position: empty plan");
  if (wp >= plan.waypoints.size()) throw std::out_of_range("future_position: waypoint index");
  if (!(speed >= 0.0)) throw std::invalid_argument("future_position: negative speed");

  double remaining = speed * (t_max_sweep + t_future);
  Vec2 prev = current.ground();
  for (std::size_t i = wp; i < plan.waypoints.size(); ++i) {
    const Vec2 next = plan.waypoints[i].ground();
    const double len = (next - prev).norm();
    if (len > 0.0) {
      if (remaining <= len) {
        const Vec2 p = prev + (next - prev) * (remaining / len);
        return {p.x, p.y, current.z, bearing(prev, next)};
      }
      remaining -= len;
    }
    prev = next;
  }
  // Ran off the end of the plan: hold the final state.
  const UavState& last = plan.waypoints.back();
  return {last.x, last.y, current.z, last.psi};
}

bool is_turning(const Trajectory& plan, std::size_t wp, double horizon_dist, double heading_tol) {
  const auto& w = plan.waypoints;
  if (w.size() < 2 || wp >= w.size()) return false;
  double arc = 0.0;
  for (std::size_t i = std::max<std::size_t>(wp, 1); i + 1 < w.size(); ++i) {
    if (i > wp) arc += (w[i].ground() - w[i - 1].ground()).norm();
    if (arc > horizon_dist) break;
    const Vec2 in = w[i].ground() - w[i - 1].ground();
    const Vec2 out = w[i + 1].ground() - w[i].ground();
    if (in.norm() <= 0.0 || out.norm() <= 0.0) continue;
    const double turn = wrap_pi(std::atan2(out.y, out.x) - std::atan2(in.y, in.x));
    if (std::abs(turn) > heading_tol) return true;
  }
  return false;
}

std::optional<CellIndex> find_high_info_cell(std::span<const CellIndex> cells,
                                             const BeliefGrid& grid, const SensorModel& model,
                                             const UavState& uav,
                                             const SweepPlannerConfig& cfg) {
  for (const CellIndex& c : cells) {
    if (!grid.in_bounds(c)) continue;
    const double p = grid.at(c);
    const Vec2 cc = grid.cell_center(c);
    const double dx = cc.x - uav.x;
    const double dy = cc.y - uav.y;
    const double range = std::sqrt(dx * dx + dy * dy + uav.z * uav.z);
    const DetectionRates rates = rates_at_range(model, range);
    const double gain = expected_entropy_reduction(p, rates.tpr, rates.fpr, rates.tnr, rates.fnr,
                                                   cfg.confidence_threshold);
    if (gain >= cfg.threshold_entropy) return c;
  }
  return std::nullopt;
}

std::optional<BoundaryHit> find_boundary_high_info_cell(
    const FootprintTrapezoid& f_current, const FootprintTrapezoid& f_future,
    const BeliefGrid& grid, const SensorModel& model, const UavState& uav, int n_layers,
    bool is_upper, const SweepPlannerConfig& cfg) {
  if (n_layers <= 0) throw std::invalid_argument("layer count must be positive");

  Vec2 axis_dir{0.0, 0.0};
  {
    Vec2 c1{0.0, 0.0};
    Vec2 c2{0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
      c1 = c1 + f_current.v[i];
      c2 = c2 + f_future.v[i];
    }
    axis_dir = (c2 - c1) * 0.25;
  }
  if (axis_dir.norm() < 1e-9) axis_dir = {std::cos(uav.psi), std::sin(uav.psi)};

  HorizonPolygon poly;
  try {
    poly = build_horizon_polygon(f_current, f_future, uav.ground(), axis_dir);
  } catch (const std::domain_error&) {
    return std::nullopt;  // degenerate coverage region: nothing to scan
  }

  const double half = is_upper ? poly.half_height_upper : poly.half_height_lower;
  const double layer_ht = half / n_layers;
  for (int layer = 0; layer < n_layers; ++layer) {
    const double cur_y = poly.layer_y(layer, layer_ht, is_upper);
    const auto seg = poly.layer_endpoints(cur_y);
    if (!seg) continue;
    const auto cells = bresenham_cells(seg->first, seg->second, grid);
    if (auto hit = find_high_info_cell(cells, grid, model, uav, cfg)) {
      return BoundaryHit{*hit, layer};
    }
  }
  return std::nullopt;
}

double bounds_from_cell(const UavState& uav, CellIndex cell, const BeliefGrid& grid,
                        const SweepPlannerConfig& cfg) {
  if (!grid.in_bounds(cell)) throw std::out_of_range("bounds_from_cell: cell outside grid");
  const Vec2 cc = grid.cell_center(cell);
  const double rel = wrap_pi(bearing(uav.ground(), cc) - uav.psi);
  return std::clamp(rel, cfg.psi_min, cfg.psi_max);
}

SweepBounds plan_sweep(const Trajectory& plan, std::size_t wp, const UavState& uav,
                       const BeliefGrid& grid, const SensorModel& model,
                       const SweepPlannerConfig& cfg, double gimbal_rate, double speed,
                       SweepDiagnostics* diag) {
  const SweepBounds full{cfg.psi_min, cfg.psi_max};
  if (diag) *diag = SweepDiagnostics{};
  try {
    const double t_sweep = max_sweep_time(cfg, gimbal_rate);
    const double horizon = speed * (t_sweep + cfg.t_future);
    // is_turning measures arcs from waypoint wp, so anchor the horizon at the
    // vehicle by discounting the distance still to fly on the current segment
    const double to_wp = wp < plan.waypoints.size()
                             ? (plan.waypoints[wp].ground() - uav.ground()).norm()
                             : 0.0;
    if (to_wp <= horizon && is_turning(plan, wp, horizon - to_wp, cfg.heading_tol)) {
      if (diag) diag->turning = true;
      return full;
    }
    const FootprintTrapezoid f_cur = swept_trapezoid(uav, cfg.psi_min, cfg.psi_max, model);
    const UavState x_future = future_position(plan, wp, uav, speed, t_sweep, cfg.t_future);
    const FootprintTrapezoid f_fut =
        swept_trapezoid(x_future, cfg.psi_min, cfg.psi_max, model);

    const auto upper =
        find_boundary_high_info_cell(f_cur, f_fut, grid, model, uav, cfg.n_layers, true, cfg);
    const auto lower =
        find_boundary_high_info_cell(f_cur, f_fut, grid, model, uav, cfg.n_layers, false, cfg);
    if (diag) {
      diag->upper = upper;
      diag->lower = lower;
    }
    double hi = upper ? bounds_from_cell(uav, upper->cell, grid, cfg) : cfg.psi_max;
    double lo = lower ? bounds_from_cell(uav, lower->cell, grid, cfg) : cfg.psi_min;
    if (lo > hi) std::swap(lo, hi);
    return {lo, hi};
  } catch (const std::exception&) {
    return full;  // any planning failure degrades to the full sweep
  }
}

}  // namespace sweep
