#pragma once

// Exhaustive ground truth over the full allocation space m^|S|: the global
// optimum with all maximizers, the census of strict local optima, and
// breadth-first distances to the nearest local optimum.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "svcalloc/domain.hpp"

namespace svcalloc {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;
inline constexpr std::size_t kNoLocalOptimum = std::numeric_limits<std::size_t>::max();

/// m^|S|, or nullopt when it does not fit in 64 bits.
std::optional<std::uint64_t> allocation_space_size(const Scenario& scenario);

struct OptimumResult {
  Utility optimum_gu = 0;
  std::vector<Allocation> optimum_allocations;  // lexicographic by state index
  std::uint64_t visited = 0;
};

struct LandscapeCensus {
  std::uint64_t total_allocations = 0;
  Utility optimum_gu = 0;
  std::vector<Allocation> optimum_allocations;
  std::uint64_t local_optima_count = 0;
  double empirical_lambda = 0.0;
  std::size_t max_bfs_distance = kNoLocalOptimum;  // kNoLocalOptimum if there is none
};

/// GU of every allocation, indexed in mixed radix with sensor 0 as the most
/// significant digit, so increasing index is lexicographic order.
class Landscape {
 public:
  Landscape(const Scenario& scenario, std::uint64_t budget = kDefaultEnumerationBudget);

  std::uint64_t size() const { return values_.size(); }
  int num_states() const { return num_states_; }
  std::size_t num_sensors() const { return num_sensors_; }

  Utility gu(std::uint64_t index) const { return values_[index]; }
  std::uint64_t index_of(const Scenario& scenario, const Allocation& allocation) const;
  Allocation allocation_at(const Scenario& scenario, std::uint64_t index) const;

  /// Calls fn(neighbor_index) for every single-sensor neighbor of `index`.
  template <typename Fn>
  void for_each_neighbor(std::uint64_t index, Fn&& fn) const {
    for (std::size_t s = 0; s < num_sensors_; ++s) {
      const std::uint64_t w = weights_[s];
      const auto digit = static_cast<int>((index / w) % static_cast<std::uint64_t>(num_states_));
      const std::uint64_t base = index - static_cast<std::uint64_t>(digit) * w;
      for (int k = 0; k < num_states_; ++k) {
        if (k != digit) fn(base + static_cast<std::uint64_t>(k) * w);
      }
    }
  }

  bool is_local_optimum(std::uint64_t index) const;

  /// BFS distance of every allocation to its nearest strict local optimum.
  std::vector<std::size_t> distances_to_local_optima() const;

 private:
  std::size_t num_sensors_;
  int num_states_;
  std::vector<std::uint64_t> weights_;
  std::vector<Utility> values_;
};

OptimumResult enumerate_optimum(const Scenario& scenario,
                                std::uint64_t budget = kDefaultEnumerationBudget);

LandscapeCensus census(const Scenario& scenario, std::uint64_t budget = kDefaultEnumerationBudget);

/// kNoLocalOptimum when the landscape has no strict local optimum.
std::size_t shortest_distance_to_local_optimum(const Scenario& scenario, const Allocation& from,
                                               std::uint64_t budget = kDefaultEnumerationBudget);

/// {total, optimum_gu, optima_count, lambda_empirical, max_bfs_distance};
/// max_bfs_distance is null when no local optimum exists.
nlohmann::json census_to_json(const LandscapeCensus& census);

}  // namespace svcalloc
