#include "sweep/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "sweep/geometry.hpp"

namespace sweep {

namespace {

void check_params(const PlannerParams& p) {
  if (!(p.budget >= 0.0)) throw std::invalid_argument("budget must be non-negative");
  if (p.sample_count < 0) throw std::invalid_argument("sample_count must be non-negative");
  if (!(p.min_turn_spacing > 0.0)) throw std::invalid_argument("min_turn_spacing must be positive");
  if (!(p.max_segment_len >= p.min_turn_spacing)) {
    throw std::invalid_argument("max_segment_len shorter than min_turn_spacing");
  }
  if (!(p.sample_spacing > 0.0)) throw std::invalid_argument("sample_spacing must be positive");
  if (!(p.uniform_sample_prob >= 0.0 && p.uniform_sample_prob <= 1.0)) {
    throw std::invalid_argument("uniform_sample_prob must be a probability");
  }
  if (!(p.psi_max >= p.psi_min)) throw std::invalid_argument("sweep extent inverted");
}

// Expected update for every covered cell at one sensor pose; accumulates the
// realized entropy reduction. Cells beyond the max sensing range never change,
// so the candidate box is clipped to it.
double apply_pose_updates(BeliefGrid& grid, const UavState& pose, const SensorModel& model,
                          bool widened, const PlannerParams& params) {
  FootprintTrapezoid region = widened
                                  ? swept_trapezoid(pose, params.psi_min, params.psi_max, model)
                                  : instantaneous_footprint(pose, 0.0, model);
  const double alt2 = pose.z * pose.z;
  const double max_ground2 = model.beta * model.beta - alt2;
  double gained = 0.0;
  for (const CellIndex& c : cells_in_footprint(region, grid)) {
    const Vec2 cc = grid.cell_center(c);
    const double dx = cc.x - pose.x;
    const double dy = cc.y - pose.y;
    const double g2 = dx * dx + dy * dy;
    if (g2 >= max_ground2) continue;
    const double range = std::sqrt(g2 + alt2);
    gained += grid.apply_expected_measurement(c, range, model, params.confidence_threshold);
  }
  return gained;
}

}  // namespace

double trajectory_information(const Trajectory& traj, const BeliefGrid& grid,
                              const SensorModel& model, bool widened,
                              const PlannerParams& params) {
  check_params(params);
  if (traj.waypoints.size() < 2) return 0.0;
  const double total = traj.arc_length();
  if (!(total > 0.0)) return 0.0;

  BeliefGrid scratch = grid;
  double gained = 0.0;
  for (double s = 0.0; s <= total + 1e-9; s += params.sample_spacing) {
    const UavState pose = traj.state_at_arc(std::min(s, total));
    gained += apply_pose_updates(scratch, pose, model, widened, params);
  }
  return gained;
}

namespace {

struct TreeNode {
  UavState state;
  int parent = -1;
  double cost = 0.0;  // arc length from the root
  double info = 0.0;  // entropy harvested along the branch
  BeliefGrid belief;  // grid after the branch's measurements
};

// Samples now follow each candidate edge; heading of every pose on the edge is
// the edge bearing, matching how the vehicle will actually fly it.
double edge_information(BeliefGrid& belief, const Vec2& from, const Vec2& to, double altitude,
                        const SensorModel& model, const PlannerParams& params) {
  const double len = (to - from).norm();
  const double psi = bearing(from, to);
  double gained = 0.0;
  for (double s = params.sample_spacing; s < len - 1e-9; s += params.sample_spacing) {
    const Vec2 p = from + (to - from) * (s / len);
    gained += apply_pose_updates(belief, {p.x, p.y, altitude, psi}, model, params.widened_fov,
                                 params);
  }
  gained += apply_pose_updates(belief, {to.x, to.y, altitude, psi}, model, params.widened_fov,
                               params);
  return gained;
}

}  // namespace

Trajectory plan_global(const UavState& start, const BeliefGrid& grid, const SensorModel& model,
                       const PlannerParams& params, std::uint64_t seed) {
  check_params(params);
  model.validate();
  if (!(start.z > 0.0)) throw std::invalid_argument("plan_global: start altitude must be positive");

  std::mt19937_64 rng(seed);

  // Entropy-weighted sampling distribution over cell centers, frozen at the
  // prior: cells promising more information under a close-range measurement
  // attract more samples. A small floor keeps the CDF valid on cold maps.
  const DetectionRates near_rates{model.p_peak, 1.0 - model.p_peak, model.p_peak,
                                  1.0 - model.p_peak};
  std::vector<double> cdf;
  cdf.reserve(grid.cells().size());
  double total_w = 0.0;
  for (int r = 0; r < grid.n_rows(); ++r) {
    for (int c = 0; c < grid.n_cols(); ++c) {
      const double gain = expected_entropy_reduction(grid.at({c, r}), near_rates.tpr,
                                                     near_rates.fpr, near_rates.tnr,
                                                     near_rates.fnr, params.confidence_threshold);
      total_w += std::max(gain, 1e-6);
      cdf.push_back(total_w);
    }
  }

  const Vec2 lo = grid.origin();
  const Vec2 hi{lo.x + grid.n_cols() * grid.cell_size(), lo.y + grid.n_rows() * grid.cell_size()};
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto sample_point = [&]() -> Vec2 {
    if (unit(rng) < params.uniform_sample_prob) {
      return {lo.x + unit(rng) * (hi.x - lo.x), lo.y + unit(rng) * (hi.y - lo.y)};
    }
    const double u = unit(rng) * total_w;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const std::size_t flat = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
    const CellIndex cell{static_cast<int>(flat % grid.n_cols()),
                         static_cast<int>(flat / grid.n_cols())};
    const Vec2 cc = grid.cell_center(cell);
    const double half = grid.cell_size() / 2.0;
    return {cc.x + (unit(rng) * 2.0 - 1.0) * half, cc.y + (unit(rng) * 2.0 - 1.0) * half};
  };

  std::vector<TreeNode> nodes;
  nodes.push_back({start, -1, 0.0, 0.0, grid});

  constexpr int kMaxParentCandidates = 4;

  for (int iter = 0; iter < params.sample_count; ++iter) {
    const Vec2 target = sample_point();

    // candidate parents: nearest few inside the connect radius, else the
    // single nearest node overall
    std::vector<std::pair<double, int>> by_dist;
    by_dist.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      by_dist.push_back({(target - nodes[i].state.ground()).norm(), static_cast<int>(i)});
    }
    std::sort(by_dist.begin(), by_dist.end());
    std::vector<int> candidates;
    for (const auto& [d, i] : by_dist) {
      if (d > params.rewire_radius && !candidates.empty()) break;
      candidates.push_back(i);
      if (candidates.size() >= kMaxParentCandidates) break;
    }

    int best_parent = -1;
    double best_score = -1.0;
    UavState best_state{};
    for (int pi : candidates) {
      const TreeNode& parent = nodes[pi];
      const Vec2 from = parent.state.ground();
      const double dist = (target - from).norm();
      if (dist < 1e-9) continue;

      // bend the desired bearing into the allowed turn cone
      const double want = bearing(from, target);
      const double turn = std::clamp(wrap_pi(want - parent.state.psi),
                                     -params.max_heading_change, params.max_heading_change);
      const double psi = wrap_pi(parent.state.psi + turn);
      const double len = std::clamp(dist, params.min_turn_spacing, params.max_segment_len);
      const Vec2 end{from.x + len * std::cos(psi), from.y + len * std::sin(psi)};

      if (end.x < lo.x || end.x > hi.x || end.y < lo.y || end.y > hi.y) continue;
      if (parent.cost + len > params.budget) continue;

      BeliefGrid scratch = parent.belief;
      const double marginal =
          edge_information(scratch, from, end, start.z, model, params);
      const double score = parent.info + marginal;
      if (score > best_score) {
        best_score = score;
        best_parent = pi;
        best_state = {end.x, end.y, start.z, psi};
      }
    }
    if (best_parent < 0) continue;

    const TreeNode& parent = nodes[best_parent];
    TreeNode child{best_state, best_parent,
                   parent.cost + (best_state.ground() - parent.state.ground()).norm(), 0.0,
                   parent.belief};
    child.info = parent.info + edge_information(child.belief, parent.state.ground(),
                                                best_state.ground(), start.z, model, params);
    nodes.push_back(std::move(child));
  }

  // best branch: maximum information, first index on ties
  std::size_t best = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].info > nodes[best].info) best = i;
  }

  Trajectory out;
  std::vector<int> chain;
  for (int i = static_cast<int>(best); i >= 0; i = nodes[i].parent) chain.push_back(i);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    out.waypoints.push_back(nodes[*it].state);
  }
  out.cost = nodes[best].cost;
  return out;
}

}  // namespace sweep
