#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sweep/belief_map.hpp"
#include "sweep/global_planner.hpp"
#include "sweep/sensor_model.hpp"
#include "sweep/simulator.hpp"
#include "sweep/sweep_planner.hpp"
#include "sweep/types.hpp"

namespace sweep {

// configuration problem with the offending field, e.g. "map.cell_size"
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct MapSpec {
  double size_x = 5000.0;
  double size_y = 5000.0;
  double cell_size = 100.0;
  PatchParams patches{};
  std::optional<std::string> prior_file;  // overrides the generated map
};

struct StartSpec {
  bool randomize = true;        // place the vehicle per-scenario from the seed
  double margin = 0.1;          // fraction of map size kept clear of the edges
  UavState state{};             // used when randomize is false
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  MapSpec map{};
  SensorModel sensor{};
  StartSpec start{};
  PlannerParams global{};
  SweepPlannerConfig sweep{};
  SimParams sim{};
};

ScenarioConfig load_config(const std::string& path);   // throws ConfigError
void save_config(const ScenarioConfig& cfg, const std::string& path);
void validate(const ScenarioConfig& cfg);              // throws ConfigError

// Deterministic materialization of one scenario from its seed: belief grid
// (prior file or random patches) and start state.
BeliefGrid build_grid(const ScenarioConfig& cfg);
UavState start_state(const ScenarioConfig& cfg);

// n deriveds of base with fresh seeds (and start states when randomized); a
// derived scenario is reproducible from (base, its seed) alone.
std::vector<ScenarioConfig> generate_scenarios(const ScenarioConfig& base, int n,
                                               std::uint64_t master_seed);
ScenarioConfig scenario_from_seed(const ScenarioConfig& base, std::uint64_t seed);

}  // namespace sweep
