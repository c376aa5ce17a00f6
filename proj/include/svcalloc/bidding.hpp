#pragma once

// Bidding protocol: every target sends sector requests to its k nearest
// sensors; every sensor turns to the sector with the highest aggregate bid.
// Rounds are synchronous and all sensors decide simultaneously. Bids can be
// dropped with a fixed probability to emulate sensors deciding before every
// bid has arrived.

#include <cstddef>
#include <optional>
#include <vector>

#include "svcalloc/domain.hpp"
#include "svcalloc/rng.hpp"

namespace svcalloc {

struct BidMessage {
  std::size_t target_index = 0;
  std::size_t sensor_index = 0;
  SensorState sector = SensorState::sector(0);
  Utility amount = 0;

  friend bool operator==(const BidMessage&, const BidMessage&) = default;
};

enum class BidMode { kFixed, kMarginal };

struct BidPolicy {
  BidMode mode = BidMode::kFixed;
  Utility fixed_amount = 1;  // used in kFixed mode
  std::size_t neighbor_count = 1;

  static BidPolicy fixed(std::size_t k, Utility amount = 1) { return {BidMode::kFixed, amount, k}; }
  static BidPolicy marginal(std::size_t k) { return {BidMode::kMarginal, 1, k}; }

  friend bool operator==(const BidPolicy&, const BidPolicy&) = default;
};

struct RoundConfig {
  int max_rounds = 50;
  int quiescence_rounds = 3;
  double miss_probability = 0.0;

  void validate() const;

  friend bool operator==(const RoundConfig&, const RoundConfig&) = default;
};

struct RoundRecord {
  int round = 0;  // 0 is the start allocation
  Allocation allocation;
  Utility gu = 0;
  std::optional<double> alpha;
};

struct RunTrace {
  std::vector<RoundRecord> rounds;
  bool converged = false;
  int rounds_executed = 0;

  const RoundRecord& final_record() const { return rounds.back(); }
};

/// The k sensors nearest to the target, ordered by (distance, index).
std::vector<std::size_t> select_neighbors(const Scenario& scenario, std::size_t target_index,
                                          std::size_t k);

/// The sector of `sensor_index` that sees the target, if the target is in range.
/// With overlapping sectors the lowest such sector is returned.
std::optional<SensorState> desired_sector(const Scenario& scenario, std::size_t sensor_index,
                                          std::size_t target_index);

/// Sensor states as seen by one target: known sensors carry their state,
/// unknown ones are absent and count as off.
using PartialAllocation = std::vector<std::optional<SensorState>>;

/// Restricts `allocation` to the target's selected neighbors.
PartialAllocation neighbor_view(const Allocation& allocation,
                                const std::vector<std::size_t>& known_sensors);

std::optional<BidMessage> compute_bid(const Scenario& scenario, const PartialAllocation& view,
                                      const BidPolicy& policy, std::size_t target_index,
                                      std::size_t sensor_index);

/// Highest aggregate amount wins, ties go to the lowest sector. With no bids
/// the sensor keeps its current state.
SensorState sensor_decide(SensorState current, const std::vector<BidMessage>& received);

/// α = gu / optimum, defined only when the optimum is positive.
std::optional<double> alpha_ratio(Utility gu, Utility optimum_gu);

RunTrace run_protocol(const Scenario& scenario, const Allocation& start, const BidPolicy& policy,
                      const RoundConfig& config, Seed rng_seed,
                      std::optional<Utility> optimum_gu = std::nullopt);

/// Fraction of executed rounds in which GU went down.
double gu_decrease_fraction(const RunTrace& trace);

}  // namespace svcalloc
