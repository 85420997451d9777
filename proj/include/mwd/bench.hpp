#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mwd/estimator.hpp"
#include "mwd/model.hpp"

namespace mwd {

/// Names accepted by test_signal.
const std::vector<std::string>& signal_names();

/// Test signals on t_i = i/n:
///   lidar    piecewise-constant skyline with closely spaced jumps, values in [0, 1.3]
///   doppler  sqrt(t(1-t)) sin(2.1 pi / (t + 0.05))
///   bumps    sum h_j (1 + |t - t_j| / w_j)^-4
///   blocks   sum h_j 1{t >= t_j}
///   smooth   exp(cos(2 pi t)) - 1, periodic and analytic
/// Throws std::invalid_argument for unknown names.
Signal test_signal(std::string_view name, std::size_t n);

/// Grid L2 norm of a - b.
double l2_error(std::span<const double> a, std::span<const double> b);

/// Mean over estimates of the grid L2 error against truth.
double rmse(const std::vector<Signal>& estimates, std::span<const double> truth);

/// Homogeneous channel set: M copies of (regular-smooth nu, or direct when nu = 0)
/// with LRD index alpha.
std::vector<ChannelSpec> homogeneous_channels(std::size_t m, double nu, double alpha,
                                              NoiseGenerator generator = NoiseGenerator::kFarima);

struct CellOptions {
  std::size_t reps = 200;
  std::uint64_t seed = 1;
  double snr_db = 20.0;
  /// Pairs replicates (2i, 2i+1) as noise draws with opposite signs.
  bool antithetic = false;
  /// Also run the unthresholded full-level inverse on every replicate.
  bool with_naive = false;
};

/// One simulate-estimate cycle.
struct ReplicateOutcome {
  double error = 0.0;
  double naive_error = 0.0;
  int j1 = 0;
  std::size_t best_channel = 0;
  std::size_t survivors = 0;
  std::size_t details = 0;
};

/// Replicate r of a cell: seeds derive from (seed, r); channel l of replicate r
/// draws the same innovations in every cell, so cells are paired.
ReplicateOutcome run_replicate(std::span<const double> truth, const std::vector<ChannelSpec>& channels,
                               const EstimatorConfig& config, const CellOptions& options, std::size_t r);

struct CellResult {
  double rmse = 0.0;
  double se = 0.0;
  double mean_j1 = 0.0;
  std::size_t modal_best_channel = 0;
  double survival_fraction = 0.0;
  double naive_rmse = 0.0;
  std::vector<double> errors;  // per replicate
  std::vector<int> j1;         // per replicate
  std::vector<std::size_t> best_channel;
};

/// Aggregates replicate outcomes; with antithetic pairs the standard error uses pair means.
CellResult summarize(const std::vector<ReplicateOutcome>& outcomes, bool antithetic);

/// Replicates in parallel (OpenMP); bit-identical to the serial reference.
CellResult run_cell(std::span<const double> truth, const std::vector<ChannelSpec>& channels,
                    const EstimatorConfig& config, const CellOptions& options);

struct ZetaChoice {
  ZetaRule rule = ZetaRule::kSqrtAlpha;
  double value = 1.0;
  std::string label() const;
};

struct ExperimentGrid {
  std::vector<std::string> signals = {"lidar"};
  std::vector<double> nus = {0.3};
  std::vector<double> alphas = {1.0};
  std::vector<std::size_t> ms = {1, 2, 3};
  std::vector<double> snr_dbs = {20.0};
  std::vector<ZetaChoice> zetas = {ZetaChoice{}};
  std::size_t reps = 200;
  std::size_t n = 4096;
  std::uint64_t master_seed = 1;
  NoiseGenerator generator = NoiseGenerator::kFarima;
  SigmaSource sigma_source = SigmaSource::kMadEstimated;
  ScaleRule scale_rule = ScaleRule::kDataDriven;
  bool antithetic = false;

  void validate() const;
};

struct CellKey {
  std::string signal;
  double nu = 0.0;
  double alpha = 1.0;
  std::size_t m = 1;
  double snr_db = 20.0;
  std::string zeta;

  bool operator==(const CellKey&) const = default;
};

struct GridCell {
  CellKey key;
  CellResult result;
  std::string error;  // non-empty if the cell failed
};

struct GridResult {
  std::vector<GridCell> cells;

  const GridCell* find(const CellKey& key) const;
};

/// Every cell of the grid; cell failures are recorded, not thrown.
GridResult run_grid(const ExperimentGrid& grid);

/// CSV columns: signal,nu,alpha,M,snr_db,zeta_rule,rmse,se,mean_j1
void write_grid_csv(std::ostream& out, const GridResult& result);
/// Markdown table with one row per (signal, snr, zeta, nu, alpha) and one column per M.
void write_grid_markdown(std::ostream& out, const GridResult& result);
/// Long format: signal,nu,alpha,M,snr_db,zeta_rule,replicate,error,j1,best_channel
void write_grid_long(std::ostream& out, const GridResult& result);

/// One-sided paired comparison of per-replicate errors: passes when
/// mean(larger - smaller) - 1.645 se > 0.
struct TrendCheck {
  std::string name;
  CellKey smaller;  // expected lower RMSE
  CellKey larger;
  double mean_diff = 0.0;
  double se = 0.0;
  bool passed = false;
};

TrendCheck paired_trend(const std::string& name, const GridCell& smaller, const GridCell& larger);

/// Monotonicity in M (each adjacent increasing step), in alpha (each adjacent decreasing step)
/// and in nu (each adjacent increasing step) over every comparable pair of cells.
std::vector<TrendCheck> check_trends(const GridResult& result);

struct SlopeResult {
  double slope = 0.0;
  double se = 0.0;
  std::vector<std::size_t> n;
  std::vector<double> rmse;
  std::vector<double> rmse_se;
};

/// Least-squares slope of log RMSE on log n; the standard error propagates
/// each cell's Monte-Carlo error (delta method).
SlopeResult rate_slope(std::string_view signal, const std::vector<ChannelSpec>& channels,
                       const EstimatorConfig& config, const std::vector<std::size_t>& n_list,
                       const CellOptions& options);

}  // namespace mwd
