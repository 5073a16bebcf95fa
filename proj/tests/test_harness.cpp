#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "sweep/batch.hpp"
#include "sweep/scenario.hpp"

using namespace sweep;

namespace {

namespace fs = std::filesystem;

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = (fs::temp_directory_path() / name).string();
  std::ofstream f(path);
  f << text;
  return path;
}

// small, fast scenario used by the batch tests
ScenarioConfig desk_config() {
  ScenarioConfig cfg;
  cfg.seed = 7;
  cfg.map.size_x = 1000.0;
  cfg.map.size_y = 1000.0;
  cfg.map.cell_size = 20.0;
  cfg.map.patches.background_p = 0.05;
  cfg.sensor.alpha = 150.0;
  cfg.sensor.beta = 400.0;
  cfg.sim.altitude = 80.0;
  cfg.sim.speed = 15.0;
  cfg.global.budget = 1200.0;
  cfg.global.sample_count = 40;
  cfg.global.rewire_radius = 250.0;
  cfg.global.min_turn_spacing = 100.0;
  cfg.global.max_segment_len = 250.0;
  cfg.global.sample_spacing = 25.0;
  return cfg;
}

}  // namespace

TEST_CASE("config loads with defaults from a minimal file") {
  const auto path = write_temp("sweep_cfg_minimal.yaml", "seed: 5\n");
  const ScenarioConfig cfg = load_config(path);
  CHECK(cfg.seed == 5);
  CHECK(cfg.map.size_x == 5000.0);
  CHECK(cfg.map.cell_size == 100.0);
  CHECK(cfg.sensor.alpha == 300.0);
  CHECK(cfg.sweep.psi_min == doctest::Approx(deg2rad(-30.0)));
  CHECK(cfg.sim.dt == 0.1);
  CHECK(cfg.global.budget == 5000.0);
  fs::remove(path);
}

TEST_CASE("config round-trips through save and load") {
  ScenarioConfig cfg = desk_config();
  cfg.sweep.threshold_entropy = 0.2;
  cfg.start.randomize = false;
  cfg.start.state = {123.0, 456.0, 0.0, deg2rad(90.0)};
  const auto path = (fs::temp_directory_path() / "sweep_cfg_roundtrip.yaml").string();
  save_config(cfg, path);
  const ScenarioConfig back = load_config(path);
  CHECK(back.seed == cfg.seed);
  CHECK(back.map.size_x == cfg.map.size_x);
  CHECK(back.map.cell_size == cfg.map.cell_size);
  CHECK(back.map.patches.background_p == doctest::Approx(0.05));
  CHECK(back.sensor.alpha == cfg.sensor.alpha);
  CHECK(back.sensor.beta == cfg.sensor.beta);
  CHECK(back.start.randomize == false);
  CHECK(back.start.state.x == doctest::Approx(123.0));
  CHECK(back.start.state.psi == doctest::Approx(deg2rad(90.0)));
  CHECK(back.global.budget == cfg.global.budget);
  CHECK(back.sweep.threshold_entropy == doctest::Approx(0.2));
  CHECK(back.sim.speed == cfg.sim.speed);
  fs::remove(path);
}

TEST_CASE("config errors carry the offending field path") {
  const auto unknown = write_temp("sweep_cfg_unknown.yaml", "sweeep:\n  n_layers: 4\n");
  CHECK_THROWS_WITH_AS(load_config(unknown), doctest::Contains("sweeep"), ConfigError);
  fs::remove(unknown);

  const auto badkey = write_temp("sweep_cfg_badkey.yaml", "sweep:\n  layers: 4\n");
  CHECK_THROWS_WITH_AS(load_config(badkey), doctest::Contains("sweep.layers"), ConfigError);
  fs::remove(badkey);

  const auto badval =
      write_temp("sweep_cfg_badval.yaml", "map:\n  cell_size: lots\n");
  try {
    load_config(badval);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "map.cell_size");
  }
  fs::remove(badval);

  const auto badsize = write_temp("sweep_cfg_badsize.yaml",
                                  "map:\n  size_x: 1010\n  cell_size: 100\n");
  CHECK_THROWS_AS(load_config(badsize), ConfigError);
  fs::remove(badsize);

  const auto badsweep = write_temp("sweep_cfg_badsweep.yaml",
                                   "sweep:\n  psi_min_deg: 30\n  psi_max_deg: -30\n");
  CHECK_THROWS_AS(load_config(badsweep), ConfigError);
  fs::remove(badsweep);

  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("validation rejects an altitude the sensor cannot see from") {
  ScenarioConfig cfg = desk_config();
  cfg.sim.altitude = cfg.sensor.beta + 1.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("grid and start state are reproducible from the seed alone") {
  const ScenarioConfig cfg = desk_config();
  const BeliefGrid a = build_grid(cfg);
  const BeliefGrid b = build_grid(cfg);
  CHECK(a.cells() == b.cells());
  CHECK(a.n_cols() == 50);
  CHECK(a.n_rows() == 50);

  const UavState s1 = start_state(cfg);
  const UavState s2 = start_state(cfg);
  CHECK(s1.x == s2.x);
  CHECK(s1.y == s2.y);
  CHECK(s1.psi == s2.psi);
  CHECK(s1.z == cfg.sim.altitude);
  // randomized start respects the margin
  CHECK(s1.x >= cfg.start.margin * cfg.map.size_x);
  CHECK(s1.x <= (1.0 - cfg.start.margin) * cfg.map.size_x);
  CHECK(s1.y >= cfg.start.margin * cfg.map.size_y);
  CHECK(s1.y <= (1.0 - cfg.start.margin) * cfg.map.size_y);

  // a different seed moves both the map and the start
  const ScenarioConfig other = scenario_from_seed(cfg, 8);
  CHECK(build_grid(other).cells() != a.cells());
  const UavState s3 = start_state(other);
  CHECK(s3.x != s1.x);

  // fixed start is honored verbatim
  ScenarioConfig fixed = cfg;
  fixed.start.randomize = false;
  fixed.start.state = {111.0, 222.0, 0.0, 0.5};
  const UavState sf = start_state(fixed);
  CHECK(sf.x == 111.0);
  CHECK(sf.y == 222.0);
  CHECK(sf.psi == 0.5);
  CHECK(sf.z == cfg.sim.altitude);
}

TEST_CASE("prior files override the generated map") {
  const ScenarioConfig cfg = desk_config();
  const BeliefGrid gen = build_grid(cfg);
  const auto path = (fs::temp_directory_path() / "sweep_prior_override.txt").string();
  gen.save_file(path);

  ScenarioConfig with_file = cfg;
  with_file.map.prior_file = path;
  with_file.seed = 12345;  // the file wins over the seed
  const BeliefGrid loaded = build_grid(with_file);
  CHECK(loaded.cells() == gen.cells());

  // dimension mismatch is a configuration error
  ScenarioConfig wrong = with_file;
  wrong.map.size_x = 500.0;
  CHECK_THROWS_AS(build_grid(wrong), ConfigError);
  fs::remove(path);
}

TEST_CASE("derived scenarios have fresh distinct seeds and replay exactly") {
  const ScenarioConfig base = desk_config();
  const auto scenarios = generate_scenarios(base, 10, 99);
  CHECK(scenarios.size() == 10);
  std::set<std::uint64_t> seeds;
  for (const auto& sc : scenarios) seeds.insert(sc.seed);
  CHECK(seeds.size() == 10);

  const auto again = generate_scenarios(base, 10, 99);
  for (int i = 0; i < 10; ++i) CHECK(scenarios[i].seed == again[i].seed);

  // replay from the recorded seed alone
  const ScenarioConfig replay = scenario_from_seed(base, scenarios[3].seed);
  CHECK(build_grid(replay).cells() == build_grid(scenarios[3]).cells());
  const UavState a = start_state(replay), b = start_state(scenarios[3]);
  CHECK(a.x == b.x);
  CHECK(a.psi == b.psi);
}

TEST_CASE("aggregate statistics") {
  const Aggregate a = aggregate_of({1.0, 2.0, 3.0, 4.0});
  CHECK(a.n == 4);
  CHECK(a.mean == doctest::Approx(2.5));
  CHECK(a.sd == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-12));
  const double half = 1.96 * a.sd / 2.0;
  CHECK(a.ci_lo == doctest::Approx(2.5 - half));
  CHECK(a.ci_hi == doctest::Approx(2.5 + half));

  const Aggregate empty = aggregate_of({});
  CHECK(empty.n == 0);
  CHECK(empty.mean == 0.0);

  const Aggregate one = aggregate_of({7.0});
  CHECK(one.n == 1);
  CHECK(one.mean == 7.0);
  CHECK(one.sd == 0.0);
  CHECK(one.ci_lo == 7.0);
  CHECK(one.ci_hi == 7.0);
}

TEST_CASE("batch runs all strategies on a shared plan and aggregates") {
  ScenarioConfig base = desk_config();
  base.global.sample_count = 25;  // keep the test quick
  const std::vector<Strategy> strats = {Strategy::adaptive, Strategy::predefined_sweep,
                                        Strategy::no_sweep};
  const BatchResult batch = run_batch(base, 2, 31, strats);

  REQUIRE(batch.records.size() == 6);  // run-major, strategy-minor
  for (int run = 0; run < 2; ++run) {
    for (std::size_t si = 0; si < 3; ++si) {
      const RunRecord& rec = batch.records[run * 3 + si];
      CHECK(rec.run_idx == run);
      CHECK(rec.strategy == strats[si]);
      CHECK(rec.ok);
    }
    // one shared plan per scenario: identical durations across strategies
    const double d0 = batch.records[run * 3].result.duration;
    CHECK(batch.records[run * 3 + 1].result.duration == d0);
    CHECK(batch.records[run * 3 + 2].result.duration == d0);
  }
  REQUIRE(batch.final_pct.size() == 3);
  for (const Aggregate& a : batch.final_pct) CHECK(a.n == 2);

  // the adaptive-vs-adaptive difference slot is empty by construction
  CHECK(batch.final_pct_diff[0].n == 0);
  CHECK(batch.final_pct_diff[0].mean == 0.0);
  // paired diffs are consistent with the per-run values
  const double want_diff_ns =
      ((batch.records[0].result.final_pct - batch.records[2].result.final_pct) +
       (batch.records[3].result.final_pct - batch.records[5].result.final_pct)) /
      2.0;
  CHECK(batch.final_pct_diff[2].mean == doctest::Approx(want_diff_ns).epsilon(1e-12));

  // mean series covers the common prefix with every run contributing
  REQUIRE(batch.mean_series.size() == 3);
  for (const auto& series : batch.mean_series) {
    CHECK(!series.empty());
    for (const MeanSeriesRow& row : series) CHECK(row.pct.n == 2);
  }

  // determinism of the whole batch
  const BatchResult again = run_batch(base, 2, 31, strats);
  for (std::size_t i = 0; i < batch.records.size(); ++i) {
    CHECK(again.records[i].result.final_pct == batch.records[i].result.final_pct);
  }
}

TEST_CASE("batch failures are recorded, excluded, and non-fatal") {
  ScenarioConfig base = desk_config();
  base.map.prior_file = "/nonexistent/prior.txt";  // setup fails for every run
  const BatchResult batch = run_batch(base, 2, 1, {Strategy::adaptive});
  REQUIRE(batch.records.size() == 2);
  for (const RunRecord& rec : batch.records) {
    CHECK_FALSE(rec.ok);
    CHECK(!rec.error.empty());
  }
  CHECK(batch.final_pct[0].n == 0);
  CHECK(batch.mean_series[0].empty());
}

TEST_CASE("emit_results writes the full artifact set") {
  ScenarioConfig base = desk_config();
  base.global.sample_count = 15;
  const auto dir = (fs::temp_directory_path() / "sweep_batch_out").string();
  fs::remove_all(dir);
  const std::vector<Strategy> strats = {Strategy::adaptive, Strategy::no_sweep};
  const BatchResult batch = run_batch(base, 2, 5, strats);
  emit_results(batch, dir);

  CHECK(fs::exists(fs::path(dir) / "aggregate.csv"));
  CHECK(fs::exists(fs::path(dir) / "mean_series_adaptive.csv"));
  CHECK(fs::exists(fs::path(dir) / "mean_series_no_sweep.csv"));
  int run_files = 0;
  for (const auto& e : fs::directory_iterator(fs::path(dir) / "runs")) {
    (void)e;
    ++run_files;
  }
  CHECK(run_files == 4);

  std::ifstream f(fs::path(dir) / "summary.json");
  REQUIRE(f.good());
  nlohmann::json j;
  CHECK_NOTHROW(f >> j);
  CHECK(j.contains("aggregates"));
  CHECK(j["aggregates"].contains("adaptive"));
  CHECK(j["runs"].size() == 4);
  fs::remove_all(dir);
}
