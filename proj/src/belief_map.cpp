#include "sweep/belief_map.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sweep {

namespace {

// keeps updated cells away from the absorbing states 0 and 1
constexpr double kProbEps = 1e-6;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(what) + " outside [0, 1]");
  }
}

}  // namespace

double cell_entropy(double p) {
  check_probability(p, "probability");
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double bayes_update(double prior, double lik_pos, double lik_neg, bool positive,
                    bool* degenerate) {
  (void)positive;  // the likelihoods already match the observed polarity
  check_probability(prior, "prior");
  check_probability(lik_pos, "likelihood_pos");
  check_probability(lik_neg, "likelihood_neg");
  if (degenerate) *degenerate = false;
  if (lik_pos == lik_neg) return prior;  // uninformative, exactly no update
  const double num = lik_pos * prior;
  const double denom = num + lik_neg * (1.0 - prior);
  if (denom <= 0.0) {
    if (degenerate) *degenerate = true;
    return prior;
  }
  return num / denom;
}

double expected_posterior(double p, const DetectionRates& rates, double confidence_threshold) {
  if (p >= confidence_threshold) {
    return bayes_update(p, rates.tpr, rates.fpr, true);
  }
  return bayes_update(p, rates.fnr, rates.tnr, false);
}

double expected_entropy_reduction(double p_old, double tpr, double fpr, double tnr, double fnr,
                                  double confidence_threshold) {
  const DetectionRates rates{tpr, fpr, tnr, fnr};
  const double p_new = expected_posterior(p_old, rates, confidence_threshold);
  return cell_entropy(p_old) - cell_entropy(p_new);
}

double percent_entropy_reduction(double h0, double ht) {
  if (!(h0 > 0.0)) throw std::domain_error("initial entropy must be positive");
  return 100.0 * (h0 - ht) / h0;
}

BeliefGrid::BeliefGrid(Vec2 origin, double cell_size, int n_cols, int n_rows, double initial_p)
    : origin_(origin), cell_size_(cell_size), n_cols_(n_cols), n_rows_(n_rows) {
  if (n_cols <= 0 || n_rows <= 0) throw std::invalid_argument("grid dimensions must be positive");
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell_size must be positive");
  check_probability(initial_p, "initial probability");
  cells_.assign(static_cast<std::size_t>(n_cols) * n_rows, initial_p);
}

double BeliefGrid::at(CellIndex c) const {
  if (!in_bounds(c)) throw std::out_of_range("cell index outside grid");
  return cells_[static_cast<std::size_t>(c.row) * n_cols_ + c.col];
}

void BeliefGrid::set(CellIndex c, double p) {
  if (!in_bounds(c)) throw std::out_of_range("cell index outside grid");
  check_probability(p, "cell probability");
  cells_[static_cast<std::size_t>(c.row) * n_cols_ + c.col] = p;
}

std::optional<CellIndex> BeliefGrid::cell_at(Vec2 world) const {
  const double fc = std::floor((world.x - origin_.x) / cell_size_);
  const double fr = std::floor((world.y - origin_.y) / cell_size_);
  const CellIndex c{static_cast<int>(fc), static_cast<int>(fr)};
  if (fc < 0 || fr < 0 || !in_bounds(c)) return std::nullopt;
  return c;
}

Vec2 BeliefGrid::cell_center(CellIndex c) const {
  return {origin_.x + (c.col + 0.5) * cell_size_, origin_.y + (c.row + 0.5) * cell_size_};
}

double BeliefGrid::apply_measurement(CellIndex c, double range_m, const SensorModel& model,
                                     bool positive) {
  const double p_old = at(c);
  const DetectionRates rates = rates_at_range(model, range_m);
  const double lik_pos = positive ? rates.tpr : rates.fnr;
  const double lik_neg = positive ? rates.fpr : rates.tnr;
  if (lik_pos == lik_neg) return p_old;  // beyond beta: no update at all
  double p_new = bayes_update(p_old, lik_pos, lik_neg, positive);
  p_new = std::clamp(p_new, kProbEps, 1.0 - kProbEps);
  cells_[static_cast<std::size_t>(c.row) * n_cols_ + c.col] = p_new;
  return p_new;
}

double BeliefGrid::apply_expected_measurement(CellIndex c, double range_m,
                                              const SensorModel& model,
                                              double confidence_threshold) {
  const double p_old = at(c);
  const DetectionRates rates = rates_at_range(model, range_m);
  if (rates.tpr == rates.fpr) return 0.0;  // uninformative range
  double p_new = expected_posterior(p_old, rates, confidence_threshold);
  p_new = std::clamp(p_new, kProbEps, 1.0 - kProbEps);
  const double gain = cell_entropy(p_old) - cell_entropy(p_new);
  if (gain <= 0.0) return 0.0;  // never apply an update that adds entropy
  cells_[static_cast<std::size_t>(c.row) * n_cols_ + c.col] = p_new;
  return gain;
}

BeliefGrid BeliefGrid::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open prior map: " + path);
  int n_cols = 0, n_rows = 0;
  double cell_size = 0.0, ox = 0.0, oy = 0.0;
  if (!(in >> n_cols >> n_rows >> cell_size >> ox >> oy)) {
    throw std::runtime_error("malformed prior map header: " + path);
  }
  BeliefGrid grid({ox, oy}, cell_size, n_cols, n_rows, 0.5);
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c < n_cols; ++c) {
      double p = 0.0;
      if (!(in >> p)) {
        std::ostringstream msg;
        msg << "prior map truncated at row " << r << " col " << c << ": " << path;
        throw std::runtime_error(msg.str());
      }
      if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << "prior map probability outside [0,1] at row " << r << " col " << c << ": " << path;
        throw std::runtime_error(msg.str());
      }
      grid.set({c, r}, p);
    }
  }
  return grid;
}

void BeliefGrid::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write prior map: " + path);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", cell_size_);
  out << n_cols_ << ' ' << n_rows_ << ' ' << buf;
  std::snprintf(buf, sizeof buf, "%.17g", origin_.x);
  out << ' ' << buf;
  std::snprintf(buf, sizeof buf, "%.17g", origin_.y);
  out << ' ' << buf << '\n';
  for (int r = 0; r < n_rows_; ++r) {
    for (int c = 0; c < n_cols_; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", cells_[static_cast<std::size_t>(r) * n_cols_ + c]);
      out << buf << (c + 1 == n_cols_ ? '\n' : ' ');
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

BeliefGrid BeliefGrid::random_patches(Vec2 origin, double cell_size, int n_cols, int n_rows,
                                      const PatchParams& params, std::uint64_t seed) {
  if (params.patches_min < 0 || params.patches_max < params.patches_min) {
    throw std::invalid_argument("bad patch count range");
  }
  if (params.patch_cells_min < 1 || params.patch_cells_max < params.patch_cells_min) {
    throw std::invalid_argument("bad patch size range");
  }
  check_probability(params.background_p, "background probability");
  check_probability(params.patch_p_lo, "patch probability");
  check_probability(params.patch_p_hi, "patch probability");
  if (params.patch_p_hi < params.patch_p_lo) throw std::invalid_argument("bad patch prior range");

  BeliefGrid grid(origin, cell_size, n_cols, n_rows, params.background_p);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count_dist(params.patches_min, params.patches_max);
  std::uniform_int_distribution<int> size_dist(params.patch_cells_min, params.patch_cells_max);
  std::uniform_real_distribution<double> p_dist(params.patch_p_lo, params.patch_p_hi);

  const int n_patches = count_dist(rng);
  for (int i = 0; i < n_patches; ++i) {
    const int w = std::min(size_dist(rng), n_cols);
    const int h = std::min(size_dist(rng), n_rows);
    std::uniform_int_distribution<int> col_dist(0, n_cols - w);
    std::uniform_int_distribution<int> row_dist(0, n_rows - h);
    const int c0 = col_dist(rng);
    const int r0 = row_dist(rng);
    const double p = p_dist(rng);
    for (int r = r0; r < r0 + h; ++r) {
      for (int c = c0; c < c0 + w; ++c) {
        grid.set({c, r}, p);
      }
    }
  }
  return grid;
}

double total_entropy(const BeliefGrid& grid) {
  double sum = 0.0;
  for (double p : grid.cells()) sum += cell_entropy(p);
  return sum;
}

}  // namespace sweep
