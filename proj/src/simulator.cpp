#include "sweep/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "sweep/geometry.hpp"

namespace sweep {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::adaptive: return "adaptive";
    case Strategy::predefined_sweep: return "predefined_sweep";
    case Strategy::no_sweep: return "no_sweep";
  }
  return "unknown";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "adaptive") return Strategy::adaptive;
  if (name == "predefined_sweep") return Strategy::predefined_sweep;
  if (name == "no_sweep") return Strategy::no_sweep;
  throw std::invalid_argument("unknown strategy: " + name);
}

namespace {

// Triangle-wave sweep between the bounds, exact reflection (closed form so a
// large step over a narrow band cannot spin). A gimbal stranded outside the
// bounds by a replan slews back to the nearest bound instead of jumping.
void advance_gimbal(GimbalState& g, double dt, double rate) {
  const double lo = g.bounds.psi1;
  const double hi = g.bounds.psi2;
  const double step = rate * dt;

  if (g.yaw < lo || g.yaw > hi) {
    const double target = std::clamp(g.yaw, lo, hi);
    const double d = target - g.yaw;
    if (std::abs(d) <= step) {
      g.yaw = target;
      g.direction = (target >= hi) ? -1 : 1;
    } else {
      g.yaw += d > 0.0 ? step : -step;
    }
    return;
  }

  const double width = hi - lo;
  if (width < 1e-9) {
    g.yaw = lo;
    return;
  }
  double v = g.direction > 0 ? (g.yaw - lo) : (2.0 * width - (g.yaw - lo));
  v = std::fmod(v + step, 2.0 * width);
  if (v < width) {
    g.yaw = lo + v;
    g.direction = 1;
  } else {
    g.yaw = lo + (2.0 * width - v);
    g.direction = -1;
  }
}

void fire_measurement(SimState& st, const SimContext& ctx) {
  FootprintTrapezoid fp;
  try {
    fp = instantaneous_footprint(st.uav, st.gimbal.yaw, ctx.model);
  } catch (const std::domain_error&) {
    return;  // grazing view: the frame covers no ground
  }
  const double alt2 = st.uav.z * st.uav.z;
  for (const CellIndex& c : cells_in_footprint(fp, st.grid)) {
    const Vec2 cc = st.grid.cell_center(c);
    const double dx = cc.x - st.uav.x;
    const double dy = cc.y - st.uav.y;
    const double range = std::sqrt(dx * dx + dy * dy + alt2);
    if (ctx.sim.sampled_measurements) {
      const DetectionRates rates = rates_at_range(ctx.model, range);
      if (rates.tpr == rates.fpr) continue;  // out of range: no draw, keeps streams aligned
      const std::size_t flat =
          static_cast<std::size_t>(c.row) * st.grid.n_cols() + c.col;
      const bool present = !st.truth_mask.empty() && st.truth_mask[flat] != 0;
      std::bernoulli_distribution detect(present ? rates.tpr : rates.fpr);
      st.grid.apply_measurement(c, range, ctx.model, detect(st.rng));
    } else {
      st.grid.apply_expected_measurement(c, range, ctx.model, ctx.sweep.confidence_threshold);
    }
  }
}

}  // namespace

void step(SimState& st, double dt, Strategy strategy, const SimContext& ctx) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");

  // 1. sweep bounds
  switch (strategy) {
    case Strategy::adaptive:
      st.replan_accum += dt;
      if (!st.replanned_once || st.replan_accum + 1e-9 >= ctx.sweep.replan_period) {
        SweepDiagnostics diag;
        st.gimbal.bounds = plan_sweep(ctx.plan, st.wp, st.uav, st.grid, ctx.model, ctx.sweep,
                                      ctx.sim.gimbal_rate, ctx.sim.speed, &diag);
        st.replans.push_back({st.time, st.gimbal.bounds, diag});
        st.replan_accum = 0.0;
        st.replanned_once = true;
      }
      break;
    case Strategy::predefined_sweep:
      st.gimbal.bounds = {ctx.sweep.psi_min, ctx.sweep.psi_max};
      break;
    case Strategy::no_sweep:
      st.gimbal.bounds = {0.0, 0.0};
      break;
  }

  // 2. follow the plan
  const double total = ctx.plan.arc_length();
  st.arc = std::min(st.arc + ctx.sim.speed * dt, total);
  const UavState on_path = ctx.plan.state_at_arc(st.arc);
  st.uav.x = on_path.x;
  st.uav.y = on_path.y;
  st.uav.psi = on_path.psi;

  // capture the next waypoint when within half a cell of it
  const double capture = st.grid.cell_size() / 2.0;
  while (st.wp + 1 < ctx.plan.waypoints.size() &&
         (ctx.plan.waypoints[st.wp].ground() - st.uav.ground()).norm() <= capture) {
    ++st.wp;
  }

  // 3. gimbal sweep
  advance_gimbal(st.gimbal, dt, ctx.sim.gimbal_rate);

  // 4. measurement ticks
  st.meas_accum += dt;
  while (st.meas_accum + 1e-9 >= ctx.sim.meas_period) {
    st.meas_accum -= ctx.sim.meas_period;
    fire_measurement(st, ctx);
  }

  st.time += dt;
}

RunResult run_scenario(const BeliefGrid& prior, const Trajectory& plan, Strategy strategy,
                       const SensorModel& model, const SweepPlannerConfig& sweep_cfg,
                       const SimParams& sim, std::uint64_t seed) {
  model.validate();
  if (plan.waypoints.empty()) throw std::invalid_argument("run_scenario: empty plan");
  if (!(sim.dt > 0.0)) throw std::invalid_argument("run_scenario: dt must be positive");
  if (!(sim.speed > 0.0)) throw std::invalid_argument("run_scenario: speed must be positive");
  if (!(sim.meas_period > 0.0)) throw std::invalid_argument("run_scenario: bad meas_period");
  if (!(sim.sample_period > 0.0)) throw std::invalid_argument("run_scenario: bad sample_period");
  if (!(sim.altitude > 0.0)) throw std::invalid_argument("run_scenario: bad altitude");
  if (!(sim.gimbal_rate > 0.0)) throw std::invalid_argument("run_scenario: bad gimbal_rate");
  if (!(sweep_cfg.psi_max >= sweep_cfg.psi_min)) {
    throw std::invalid_argument("run_scenario: sweep limits inverted");
  }

  SimState st(prior);
  st.rng.seed(seed);
  st.uav = plan.waypoints.front();
  st.uav.z = sim.altitude;
  st.wp = plan.waypoints.size() > 1 ? 1 : 0;
  st.gimbal.bounds = strategy == Strategy::no_sweep
                         ? SweepBounds{0.0, 0.0}
                         : SweepBounds{sweep_cfg.psi_min, sweep_cfg.psi_max};

  if (sim.sampled_measurements) {
    // ground truth drawn from the prior itself
    st.truth_mask.resize(st.grid.cells().size());
    for (std::size_t i = 0; i < st.truth_mask.size(); ++i) {
      std::bernoulli_distribution present(st.grid.cells()[i]);
      st.truth_mask[i] = present(st.rng) ? 1 : 0;
    }
  }

  RunResult res;
  res.h0 = total_entropy(prior);

  const SimContext ctx{plan, model, sweep_cfg, sim};
  const double lo_limit = std::min(sweep_cfg.psi_min, 0.0) - 1e-9;
  const double hi_limit = std::max(sweep_cfg.psi_max, 0.0) + 1e-9;

  auto record = [&](SimState& s) {
    const double h = total_entropy(s.grid);
    const double pct = res.h0 > 0.0 ? percent_entropy_reduction(res.h0, h) : 0.0;
    res.series.push_back({s.time, h, pct, rad2deg(s.gimbal.yaw), rad2deg(s.gimbal.bounds.psi1),
                          rad2deg(s.gimbal.bounds.psi2), s.uav.x, s.uav.y});
  };
  record(st);

  const double total = plan.arc_length();
  const long max_steps = static_cast<long>(std::ceil(total / (sim.speed * sim.dt))) + 8;
  double sample_accum = 0.0;
  for (long i = 0; i < max_steps && st.arc + 1e-9 < total; ++i) {
    step(st, sim.dt, strategy, ctx);
    if (st.gimbal.yaw < lo_limit || st.gimbal.yaw > hi_limit ||
        st.gimbal.bounds.psi1 < lo_limit || st.gimbal.bounds.psi2 > hi_limit) {
      ++st.bound_violations;
    }
    sample_accum += sim.dt;
    if (sample_accum + 1e-9 >= sim.sample_period) {
      sample_accum -= sim.sample_period;
      record(st);
    }
  }
  if (res.series.empty() || res.series.back().t != st.time) record(st);

  res.replans = std::move(st.replans);
  res.final_entropy = total_entropy(st.grid);
  res.final_pct = res.h0 > 0.0 ? percent_entropy_reduction(res.h0, res.final_entropy) : 0.0;
  res.duration = st.time;
  res.rate_per_s = res.duration > 0.0 ? res.final_pct / res.duration : 0.0;
  res.bound_violations = st.bound_violations;
  return res;
}

void write_series(std::ostream& os, const std::vector<SeriesRow>& series) {
  os << "# t entropy_bits pct_reduction psi_c_deg psi1_deg psi2_deg x y\n";
  char buf[256];
  for (const SeriesRow& r : series) {
    std::snprintf(buf, sizeof buf, "%.6f %.9g %.9g %.9g %.9g %.9g %.9g %.9g\n", r.t,
                  r.entropy_bits, r.pct_reduction, r.psi_c_deg, r.psi1_deg, r.psi2_deg, r.x, r.y);
    os << buf;
  }
}

void write_replan_log(std::ostream& os, const std::vector<ReplanRecord>& replans) {
  os << "# t psi1_deg psi2_deg turning upper_layer lower_layer\n";
  char buf[256];
  for (const ReplanRecord& r : replans) {
    std::snprintf(buf, sizeof buf, "%.6f %.9g %.9g %d %d %d\n", r.t, rad2deg(r.bounds.psi1),
                  rad2deg(r.bounds.psi2), r.diag.turning ? 1 : 0,
                  r.diag.upper ? r.diag.upper->layer : -1,
                  r.diag.lower ? r.diag.lower->layer : -1);
    os << buf;
  }
}

}  // namespace sweep
