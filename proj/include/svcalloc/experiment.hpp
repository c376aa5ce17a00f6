#pragma once

// Communication sweep: for every neighbor count k, every seeded random
// placement and every run, execute the bidding protocol and score each
// round against the placement's exhaustive optimum.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "svcalloc/bidding.hpp"
#include "svcalloc/domain.hpp"
#include "svcalloc/oracle.hpp"
#include "svcalloc/rng.hpp"
#include "svcalloc/search.hpp"

namespace svcalloc {

struct ExperimentConfig {
  int num_sensors = 7;
  int num_targets = 7;
  double field_width = 10.0;
  double field_height = 10.0;
  int placements = 100;
  int runs_per_placement = 10;
  std::vector<int> neighbor_counts = {1, 2, 3, 4, 5, 6, 7};
  Seed master_seed = 1;
  BidMode bid_mode = BidMode::kFixed;
  Utility fixed_bid_amount = 1;
  RoundConfig round_config;
  GeometryParams geometry;
  UtilityParams utility;
  bool off_allowed = false;
  std::uint64_t oracle_budget = kDefaultEnumerationBudget;

  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j, const std::string& source);
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

Seed placement_seed(const ExperimentConfig& config, int placement_index);
Seed run_seed(const ExperimentConfig& config, int k, int placement_index, int run_index);

/// Positions drawn i.i.d. uniform over the field from the placement's own
/// stream: all sensors (x then y), then all targets.
Scenario random_scenario(const ExperimentConfig& config, int placement_index);

struct SweepCell {
  int k = 0;
  int placement = 0;
  int run = 0;
  Utility optimum_gu = 0;
  Utility final_gu = 0;
  std::optional<double> final_alpha;  // absent for degenerate placements
  int rounds = 0;                     // rounds executed until quiescence or the cap
  bool converged = false;
  RunTrace trace;
};

struct KStats {
  int k = 0;
  std::size_t cells = 0;
  std::size_t excluded = 0;  // undefined-α cells
  std::size_t optimal = 0;   // final GU equal to the optimum
  std::map<std::int64_t, std::size_t> histogram;  // bin index -> count, bin width 0.05
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<Utility> optimum_gu;  // per placement
  std::vector<SweepCell> cells;     // ordered by (k, placement, run)
  std::vector<KStats> per_k;        // ordered as config.neighbor_counts

  double fraction_optimal(int k) const;
  const KStats& stats(int k) const;
};

/// Histogram bin of gu/optimum in steps of 0.05, computed exactly: floor(20 * gu / optimum).
std::int64_t alpha_bin(Utility gu, Utility optimum_gu);

/// `threads` == 0 uses the hardware concurrency. Results do not depend on it.
SweepResult run_sweep(const ExperimentConfig& config, unsigned threads = 0);

/// Same sweep over caller-supplied placements (one per config.placements).
SweepResult run_sweep(const ExperimentConfig& config, std::vector<Scenario> scenarios,
                      unsigned threads = 0);

struct SummaryRow {
  int k = 0;
  double mean_alpha = 0.0;
  double frac_optimal = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double mean_rounds = 0.0;
  std::size_t cells = 0;
  std::size_t excluded = 0;
};

std::vector<SummaryRow> summarize(const SweepResult& result);

/// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);

void write_traces_csv(std::ostream& out, const SweepResult& result);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_histogram_csv(std::ostream& out, const SweepResult& result);
/// Final α averaged over the runs of each placement.
void write_placement_summary_csv(std::ostream& out, const SweepResult& result);

/// Writes traces.csv, summary.csv, histogram.csv and placement_summary.csv.
void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& directory);

/// Trace CSV rows for a single run (placement_id and run_id given by the caller).
void write_trace_rows(std::ostream& out, const RunTrace& trace, int placement_id, int run_id, int k);
void write_trace_header(std::ostream& out);

/// Individual hill climbing as a round-based process: in each round every
/// target, in index order, performs one step. Stops at quiescence or the cap.
RunTrace run_individual_hill_climb(const Scenario& scenario, const Allocation& start,
                                   const RoundConfig& config, Seed rng_seed,
                                   std::optional<Utility> optimum_gu = std::nullopt);

/// Global hill climbing reported as a trace with one record per accepted step.
/// Only the first and last records carry allocations.
RunTrace run_global_hill_climb(const Scenario& scenario, const Allocation& start, Seed rng_seed,
                               std::optional<Utility> optimum_gu = std::nullopt);

std::string format_double(double value);

}  // namespace svcalloc
