#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>
#include <sstream>

#include "sweep/simulator.hpp"

using namespace sweep;

namespace {

struct Rig {
  SensorModel model;
  SweepPlannerConfig sweep;
  SimParams sim;
  BeliefGrid grid;
  Trajectory plan;

  Rig()
      : grid(BeliefGrid::random_patches({0, 0}, 20.0, 50, 50,
                                        [] {
                                          PatchParams pp;
                                          pp.background_p = 0.05;
                                          return pp;
                                        }(),
                                        11)) {
    model.alpha = 150.0;
    model.beta = 400.0;
    sim.altitude = 80.0;
    sim.speed = 15.0;
    plan.waypoints = {{100, 500, 80, 0}, {400, 500, 80, 0}, {650, 620, 80, 0}};
    plan.waypoints[2].psi = bearing({400, 500}, {650, 620});
    plan.cost = plan.arc_length();
  }
};

std::string series_text(const RunResult& r) {
  std::ostringstream ss;
  write_series(ss, r.series);
  return ss.str();
}

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (Strategy s : {Strategy::adaptive, Strategy::predefined_sweep, Strategy::no_sweep}) {
    CHECK(strategy_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_AS(strategy_from_string("frobnicate"), std::invalid_argument);
}

TEST_CASE("gimbal sweeps a triangle wave between the bounds") {
  Rig rig;
  // straight long plan so the adaptive machinery stays out of the picture
  Trajectory plan;
  plan.waypoints = {{0, 500, 80, 0}, {3000, 500, 80, 0}};
  SimContext ctx{plan, rig.model, rig.sweep, rig.sim};
  SimState st(rig.grid);
  st.uav = plan.waypoints.front();
  st.uav.z = rig.sim.altitude;
  st.wp = 1;
  st.gimbal.bounds = {rig.sweep.psi_min, rig.sweep.psi_max};

  // rate 30 deg/s, dt 0.1: 3 deg per step from 0 toward +30
  const double deg_per_step = rad2deg(ctx.sim.gimbal_rate) * ctx.sim.dt;
  for (int i = 1; i <= 10; ++i) {
    step(st, ctx.sim.dt, Strategy::predefined_sweep, ctx);
    CHECK(rad2deg(st.gimbal.yaw) == doctest::Approx(i * deg_per_step).epsilon(1e-9));
  }
  CHECK(rad2deg(st.gimbal.yaw) == doctest::Approx(30.0));
  // reflection: next step comes back down
  step(st, ctx.sim.dt, Strategy::predefined_sweep, ctx);
  CHECK(rad2deg(st.gimbal.yaw) == doctest::Approx(27.0));
  CHECK(st.gimbal.direction == -1);
  // and never leaves the band over a long horizon
  for (int i = 0; i < 500; ++i) {
    step(st, ctx.sim.dt, Strategy::predefined_sweep, ctx);
    CHECK(st.gimbal.yaw >= rig.sweep.psi_min - 1e-12);
    CHECK(st.gimbal.yaw <= rig.sweep.psi_max + 1e-12);
  }
}

TEST_CASE("no-sweep keeps the camera on the nose") {
  Rig rig;
  const RunResult r = run_scenario(rig.grid, rig.plan, Strategy::no_sweep, rig.model, rig.sweep,
                                   rig.sim, 1);
  for (const SeriesRow& row : r.series) CHECK(row.psi_c_deg == 0.0);
  CHECK(r.bound_violations == 0);
}

TEST_CASE("expected-update runs reduce entropy monotonically") {
  Rig rig;
  for (Strategy s : {Strategy::adaptive, Strategy::predefined_sweep, Strategy::no_sweep}) {
    const RunResult r = run_scenario(rig.grid, rig.plan, s, rig.model, rig.sweep, rig.sim, 1);
    REQUIRE(r.series.size() > 2);
    CHECK(r.h0 == doctest::Approx(total_entropy(rig.grid)));
    double prev_h = std::numeric_limits<double>::infinity();
    double prev_pct = -1.0;
    for (const SeriesRow& row : r.series) {
      CHECK(row.entropy_bits <= prev_h + 1e-12);
      CHECK(row.pct_reduction >= prev_pct - 1e-12);
      prev_h = row.entropy_bits;
      prev_pct = row.pct_reduction;
    }
    CHECK(r.final_pct == doctest::Approx(r.series.back().pct_reduction));
    CHECK(r.final_pct > 0.0);  // the plan flies over sensed ground
    CHECK(r.duration > 0.0);
    CHECK(r.rate_per_s == doctest::Approx(r.final_pct / r.duration));
  }
}

TEST_CASE("adaptive runs respect the gimbal limits everywhere") {
  Rig rig;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const RunResult r =
        run_scenario(rig.grid, rig.plan, Strategy::adaptive, rig.model, rig.sweep, rig.sim, seed);
    CHECK(r.bound_violations == 0);
    CHECK(!r.replans.empty());
    for (const SeriesRow& row : r.series) {
      CHECK(row.psi_c_deg >= rad2deg(rig.sweep.psi_min) - 1e-9);
      CHECK(row.psi_c_deg <= rad2deg(rig.sweep.psi_max) + 1e-9);
      CHECK(row.psi1_deg <= row.psi2_deg);
    }
    for (const ReplanRecord& rp : r.replans) {
      CHECK(rp.bounds.psi1 >= rig.sweep.psi_min - 1e-12);
      CHECK(rp.bounds.psi2 <= rig.sweep.psi_max + 1e-12);
      CHECK(rp.bounds.psi1 <= rp.bounds.psi2);
    }
    // replans spaced by the replan period from t = 0
    CHECK(r.replans.front().t == 0.0);
    for (std::size_t i = 1; i < r.replans.size(); ++i) {
      CHECK(r.replans[i].t - r.replans[i - 1].t ==
            doctest::Approx(rig.sweep.replan_period).epsilon(1e-6));
    }
  }
}

TEST_CASE("runs are deterministic per seed, expected and sampled") {
  Rig rig;
  const RunResult a =
      run_scenario(rig.grid, rig.plan, Strategy::adaptive, rig.model, rig.sweep, rig.sim, 9);
  const RunResult b =
      run_scenario(rig.grid, rig.plan, Strategy::adaptive, rig.model, rig.sweep, rig.sim, 9);
  CHECK(series_text(a) == series_text(b));

  SimParams sampled = rig.sim;
  sampled.sampled_measurements = true;
  const RunResult c =
      run_scenario(rig.grid, rig.plan, Strategy::adaptive, rig.model, rig.sweep, sampled, 9);
  const RunResult d =
      run_scenario(rig.grid, rig.plan, Strategy::adaptive, rig.model, rig.sweep, sampled, 9);
  CHECK(series_text(c) == series_text(d));
  const RunResult e =
      run_scenario(rig.grid, rig.plan, Strategy::adaptive, rig.model, rig.sweep, sampled, 10);
  CHECK(series_text(c) != series_text(e));  // the seed actually drives the draws
}

TEST_CASE("sampled-measurement runs stay clamped and finite") {
  Rig rig;
  SimParams sampled = rig.sim;
  sampled.sampled_measurements = true;
  const RunResult r =
      run_scenario(rig.grid, rig.plan, Strategy::predefined_sweep, rig.model, rig.sweep, sampled,
                   21);
  for (const SeriesRow& row : r.series) {
    CHECK(std::isfinite(row.entropy_bits));
    CHECK(row.entropy_bits >= 0.0);
  }
  CHECK(r.bound_violations == 0);
}

TEST_CASE("adaptive with an unreachable threshold replays predefined exactly") {
  Rig rig;
  SweepPlannerConfig inf_cfg = rig.sweep;
  inf_cfg.threshold_entropy = std::numeric_limits<double>::infinity();
  const RunResult a =
      run_scenario(rig.grid, rig.plan, Strategy::adaptive, rig.model, inf_cfg, rig.sim, 4);
  const RunResult b =
      run_scenario(rig.grid, rig.plan, Strategy::predefined_sweep, rig.model, inf_cfg, rig.sim, 4);
  CHECK(series_text(a) == series_text(b));
}

TEST_CASE("degenerate priors and plans do not break the run") {
  Rig rig;
  // fully decided map: zero initial entropy, percent reduction pinned to zero
  BeliefGrid decided({0, 0}, 20.0, 50, 50, 0.0);
  const RunResult r = run_scenario(decided, rig.plan, Strategy::predefined_sweep, rig.model,
                                   rig.sweep, rig.sim, 1);
  CHECK(r.h0 == 0.0);
  CHECK(r.final_pct == 0.0);
  for (const SeriesRow& row : r.series) CHECK(row.pct_reduction == 0.0);

  // single-waypoint plan: one sample, zero duration
  Trajectory point;
  point.waypoints = {{500, 500, 80, 0}};
  const RunResult p =
      run_scenario(rig.grid, point, Strategy::adaptive, rig.model, rig.sweep, rig.sim, 1);
  CHECK(p.duration == 0.0);
  CHECK(p.series.size() == 1);
  CHECK(p.rate_per_s == 0.0);

  CHECK_THROWS_AS(run_scenario(rig.grid, Trajectory{}, Strategy::adaptive, rig.model, rig.sweep,
                               rig.sim, 1),
                  std::invalid_argument);
  SimParams bad = rig.sim;
  bad.dt = 0.0;
  CHECK_THROWS_AS(run_scenario(rig.grid, rig.plan, Strategy::adaptive, rig.model, rig.sweep, bad,
                               1),
                  std::invalid_argument);
}
