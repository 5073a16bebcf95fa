#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sweep/scenario.hpp"
#include "sweep/simulator.hpp"

namespace sweep {

struct Aggregate {
  double mean = 0.0;
  double sd = 0.0;
  double ci_lo = 0.0;   // normal-approximation 95% interval
  double ci_hi = 0.0;
  int n = 0;
};

Aggregate aggregate_of(const std::vector<double>& xs);

struct RunRecord {
  int run_idx = 0;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::adaptive;
  bool ok = false;
  std::string error;
  RunResult result;
};

struct MeanSeriesRow {
  double t = 0.0;
  Aggregate pct{};
};

struct BatchResult {
  std::vector<Strategy> strategies;
  std::vector<RunRecord> records;                       // run-major, strategy-minor
  std::vector<Aggregate> final_pct;                     // per strategy
  std::vector<Aggregate> rate_per_s;                    // per strategy
  // paired per-run differences adaptive minus other, indexed like strategies
  // (the adaptive-vs-adaptive slot is all zeros)
  std::vector<Aggregate> final_pct_diff;
  std::vector<std::vector<MeanSeriesRow>> mean_series;  // per strategy
};

// Runs n scenarios derived from base, sharing one global plan per scenario
// across all strategies. Individual run failures are recorded and excluded
// from the aggregates.
BatchResult run_batch(const ScenarioConfig& base, int n_runs, std::uint64_t master_seed,
                      const std::vector<Strategy>& strategies);

// per-run series files (seed in the name), aggregate.csv, mean-series CSVs and
// summary.json under dir
void emit_results(const BatchResult& batch, const std::string& dir);

}  // namespace sweep
