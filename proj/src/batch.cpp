#include "sweep/batch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "sweep/global_planner.hpp"

namespace sweep {

Aggregate aggregate_of(const std::vector<double>& xs) {
  Aggregate a;
  a.n = static_cast<int>(xs.size());
  if (a.n == 0) return a;
  double sum = 0.0;
  for (double x : xs) sum += x;
  a.mean = sum / a.n;
  if (a.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.sd = std::sqrt(ss / (a.n - 1));
  }
  const double half = a.n > 0 ? 1.96 * a.sd / std::sqrt(static_cast<double>(a.n)) : 0.0;
  a.ci_lo = a.mean - half;
  a.ci_hi = a.mean + half;
  return a;
}

BatchResult run_batch(const ScenarioConfig& base, int n_runs, std::uint64_t master_seed,
                      const std::vector<Strategy>& strategies) {
  if (n_runs < 0) throw std::invalid_argument("run_batch: negative run count");
  if (strategies.empty()) throw std::invalid_argument("run_batch: no strategies");
  validate(base);

  BatchResult out;
  out.strategies = strategies;
  const auto scenarios = generate_scenarios(base, n_runs, master_seed);

  for (int run = 0; run < n_runs; ++run) {
    const ScenarioConfig& sc = scenarios[run];
    BeliefGrid grid({0.0, 0.0}, 1.0, 1, 1);
    Trajectory plan;
    std::string setup_error;
    try {
      grid = build_grid(sc);
      const UavState start = start_state(sc);
      plan = plan_global(start, grid, sc.sensor, sc.global, sc.seed);
    } catch (const std::exception& e) {
      setup_error = e.what();
    }
    for (Strategy strat : strategies) {
      RunRecord rec;
      rec.run_idx = run;
      rec.seed = sc.seed;
      rec.strategy = strat;
      if (!setup_error.empty()) {
        rec.error = "setup: " + setup_error;
      } else {
        try {
          rec.result = run_scenario(grid, plan, strat, sc.sensor, sc.sweep, sc.sim, sc.seed);
          rec.ok = true;
        } catch (const std::exception& e) {
          rec.error = e.what();
        }
      }
      out.records.push_back(std::move(rec));
    }
  }

  const std::size_t n_strat = strategies.size();
  auto records_of = [&](std::size_t si) {
    std::vector<const RunRecord*> recs;
    for (std::size_t i = si; i < out.records.size(); i += n_strat) recs.push_back(&out.records[i]);
    return recs;
  };

  for (std::size_t si = 0; si < n_strat; ++si) {
    std::vector<double> finals, rates;
    for (const RunRecord* r : records_of(si)) {
      if (!r->ok) continue;
      finals.push_back(r->result.final_pct);
      rates.push_back(r->result.rate_per_s);
    }
    out.final_pct.push_back(aggregate_of(finals));
    out.rate_per_s.push_back(aggregate_of(rates));
  }

  // paired differences against the adaptive strategy, when it was run
  const auto adaptive_it = std::find(strategies.begin(), strategies.end(), Strategy::adaptive);
  for (std::size_t si = 0; si < n_strat; ++si) {
    std::vector<double> diffs;
    if (adaptive_it != strategies.end() && strategies[si] != Strategy::adaptive) {
      const std::size_t ai = adaptive_it - strategies.begin();
      const auto a_recs = records_of(ai);
      const auto o_recs = records_of(si);
      for (std::size_t r = 0; r < a_recs.size(); ++r) {
        if (a_recs[r]->ok && o_recs[r]->ok) {
          diffs.push_back(a_recs[r]->result.final_pct - o_recs[r]->result.final_pct);
        }
      }
    }
    out.final_pct_diff.push_back(aggregate_of(diffs));
  }

  // mean percent-reduction series over the common time prefix of the ok runs
  for (std::size_t si = 0; si < n_strat; ++si) {
    std::vector<const RunRecord*> ok_recs;
    for (const RunRecord* r : records_of(si)) {
      if (r->ok) ok_recs.push_back(r);
    }
    std::vector<MeanSeriesRow> rows;
    if (!ok_recs.empty()) {
      std::size_t prefix = std::numeric_limits<std::size_t>::max();
      for (const RunRecord* r : ok_recs) prefix = std::min(prefix, r->result.series.size());
      for (std::size_t j = 0; j < prefix; ++j) {
        std::vector<double> xs;
        xs.reserve(ok_recs.size());
        for (const RunRecord* r : ok_recs) xs.push_back(r->result.series[j].pct_reduction);
        rows.push_back({ok_recs.front()->result.series[j].t, aggregate_of(xs)});
      }
    }
    out.mean_series.push_back(std::move(rows));
  }

  return out;
}

void emit_results(const BatchResult& batch, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "runs");

  for (const RunRecord& rec : batch.records) {
    char name[160];
    std::snprintf(name, sizeof name, "run%03d_seed%llu_%s.txt", rec.run_idx,
                  static_cast<unsigned long long>(rec.seed), to_string(rec.strategy));
    std::ofstream f(fs::path(dir) / "runs" / name);
    if (!f) throw std::runtime_error(std::string("cannot write run series: ") + name);
    if (rec.ok) {
      write_series(f, rec.result.series);
    } else {
      f << "# failed: " << rec.error << "\n";
    }
  }

  {
    std::ofstream f(fs::path(dir) / "aggregate.csv");
    if (!f) throw std::runtime_error("cannot write aggregate.csv");
    f << "strategy,n,mean_final_pct,ci_lo,ci_hi,sd,mean_rate_per_s,"
         "adaptive_minus_this_mean,adaptive_minus_this_ci_lo,adaptive_minus_this_ci_hi\n";
    char buf[256];
    for (std::size_t si = 0; si < batch.strategies.size(); ++si) {
      const Aggregate& fp = batch.final_pct[si];
      const Aggregate& rt = batch.rate_per_s[si];
      const Aggregate& df = batch.final_pct_diff[si];
      std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                    to_string(batch.strategies[si]), fp.n, fp.mean, fp.ci_lo, fp.ci_hi, fp.sd,
                    rt.mean, df.mean, df.ci_lo, df.ci_hi);
      f << buf;
    }
  }

  for (std::size_t si = 0; si < batch.strategies.size(); ++si) {
    std::ofstream f(fs::path(dir) /
                    (std::string("mean_series_") + to_string(batch.strategies[si]) + ".csv"));
    if (!f) throw std::runtime_error("cannot write mean series csv");
    f << "t,mean_pct,ci_lo,ci_hi,n\n";
    char buf[160];
    for (const MeanSeriesRow& row : batch.mean_series[si]) {
      std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%d\n", row.t, row.pct.mean,
                    row.pct.ci_lo, row.pct.ci_hi, row.pct.n);
      f << buf;
    }
  }

  nlohmann::json j;
  for (std::size_t si = 0; si < batch.strategies.size(); ++si) {
    const char* name = to_string(batch.strategies[si]);
    const Aggregate& fp = batch.final_pct[si];
    const Aggregate& rt = batch.rate_per_s[si];
    const Aggregate& df = batch.final_pct_diff[si];
    j["aggregates"][name] = {
        {"n", fp.n},
        {"final_pct", {{"mean", fp.mean}, {"sd", fp.sd}, {"ci", {fp.ci_lo, fp.ci_hi}}}},
        {"rate_per_s", {{"mean", rt.mean}, {"sd", rt.sd}, {"ci", {rt.ci_lo, rt.ci_hi}}}},
        {"adaptive_minus_this",
         {{"mean", df.mean}, {"sd", df.sd}, {"ci", {df.ci_lo, df.ci_hi}}, {"n", df.n}}},
    };
  }
  j["runs"] = nlohmann::json::array();
  for (const RunRecord& rec : batch.records) {
    nlohmann::json r = {
        {"run", rec.run_idx},        {"seed", rec.seed},
        {"strategy", to_string(rec.strategy)}, {"ok", rec.ok},
    };
    if (rec.ok) {
      r["final_pct"] = rec.result.final_pct;
      r["rate_per_s"] = rec.result.rate_per_s;
      r["duration"] = rec.result.duration;
      r["bound_violations"] = rec.result.bound_violations;
    } else {
      r["error"] = rec.error;
    }
    j["runs"].push_back(std::move(r));
  }
  std::ofstream f(fs::path(dir) / "summary.json");
  if (!f) throw std::runtime_error("cannot write summary.json");
  f << j.dump(2) << "\n";
}

}  // namespace sweep
