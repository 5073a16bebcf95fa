#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sweep/sensor_model.hpp"
#include "sweep/types.hpp"

namespace sweep {

// Binary entropy of a Bernoulli cell, in bits. 0*log0 is taken as 0.
// Throws std::domain_error when p is outside [0, 1].
double cell_entropy(double p);

// Posterior target probability given one measurement. lik_pos = P(Z|target),
// lik_neg = P(Z|no target) for the observed measurement polarity Z. Equal
// likelihoods return the prior exactly (uninformative measurement). A zero
// denominator returns the prior and sets *degenerate when provided.
double bayes_update(double prior, double lik_pos, double lik_neg, bool positive,
                    bool* degenerate = nullptr);

// Posterior a planner expects before measuring: cells at or above the
// confidence threshold are assumed to return a positive (tpr/fpr), the rest a
// negative (fnr/tnr).
double expected_posterior(double p, const DetectionRates& rates, double confidence_threshold);

// Entropy drop of the assumed-measurement update above. Can be negative for
// priors whose assumed outcome would push them toward 0.5.
double expected_entropy_reduction(double p_old, double tpr, double fpr, double tnr,
                                  double fnr, double confidence_threshold);

double percent_entropy_reduction(double h0, double ht);  // throws if h0 <= 0

struct PatchParams {
  int patches_min = 3;
  int patches_max = 6;
  int patch_cells_min = 3;     // patch edge length, cells
  int patch_cells_max = 8;
  double patch_p_lo = 0.8;
  double patch_p_hi = 0.95;
  double background_p = 0.5;
};

// Regular grid of target-presence probabilities, row-major, row 0 at origin_y.
class BeliefGrid {
 public:
  BeliefGrid(Vec2 origin, double cell_size, int n_cols, int n_rows, double initial_p = 0.5);

  static BeliefGrid load_file(const std::string& path);
  void save_file(const std::string& path) const;

  // rectangular high-prior patches on a uniform background, reproducible from seed
  static BeliefGrid random_patches(Vec2 origin, double cell_size, int n_cols, int n_rows,
                                   const PatchParams& params, std::uint64_t seed);

  int n_cols() const { return n_cols_; }
  int n_rows() const { return n_rows_; }
  double cell_size() const { return cell_size_; }
  Vec2 origin() const { return origin_; }
  Vec2 max_corner() const {
    return {origin_.x + n_cols_ * cell_size_, origin_.y + n_rows_ * cell_size_};
  }

  bool in_bounds(CellIndex c) const {
    return c.col >= 0 && c.col < n_cols_ && c.row >= 0 && c.row < n_rows_;
  }
  double at(CellIndex c) const;                    // throws std::out_of_range
  void set(CellIndex c, double p);                 // throws on bad index or p outside [0,1]
  std::optional<CellIndex> cell_at(Vec2 world) const;
  Vec2 cell_center(CellIndex c) const;

  // One real measurement. Returns the new probability, clamped into
  // [1e-6, 1 - 1e-6]; uninformative ranges (at or beyond beta) leave the cell
  // untouched bit-for-bit.
  double apply_measurement(CellIndex c, double range_m, const SensorModel& model, bool positive);

  // Assumed-measurement update used by planners and the deterministic
  // simulator. Applies the expected posterior only when it lowers the cell's
  // entropy; returns the (nonnegative) entropy reduction achieved.
  double apply_expected_measurement(CellIndex c, double range_m, const SensorModel& model,
                                    double confidence_threshold);

  const std::vector<double>& cells() const { return cells_; }

 private:
  Vec2 origin_;
  double cell_size_;
  int n_cols_;
  int n_rows_;
  std::vector<double> cells_;
};

double total_entropy(const BeliefGrid& grid);

}  // namespace sweep
