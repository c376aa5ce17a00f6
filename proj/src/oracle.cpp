#include "svcalloc/oracle.hpp"

#include <algorithm>
#include <deque>

namespace svcalloc {

namespace {

std::uint64_t checked_space(const Scenario& scenario, std::uint64_t budget) {
  const auto size = allocation_space_size(scenario);
  if (!size || *size > budget) {
    throw BudgetExceeded("allocation space " + std::to_string(scenario.num_states()) + "^" +
                         std::to_string(scenario.num_sensors()) +
                         " exceeds the enumeration budget of " + std::to_string(budget));
  }
  return *size;
}

}  // namespace

std::optional<std::uint64_t> allocation_space_size(const Scenario& scenario) {
  const auto m = static_cast<std::uint64_t>(scenario.num_states());
  std::uint64_t total = 1;
  for (std::size_t s = 0; s < scenario.num_sensors(); ++s) {
    if (m != 0 && total > std::numeric_limits<std::uint64_t>::max() / m) return std::nullopt;
    total *= m;
  }
  return total;
}

Landscape::Landscape(const Scenario& scenario, std::uint64_t budget)
    : num_sensors_(scenario.num_sensors()), num_states_(scenario.num_states()) {
  const std::uint64_t total = checked_space(scenario, budget);
  weights_.assign(num_sensors_, 1);
  for (std::size_t s = num_sensors_; s-- > 1;) {
    weights_[s - 1] = weights_[s] * static_cast<std::uint64_t>(num_states_);
  }
  const VisibilityTable table(scenario);
  values_.resize(total);
  std::vector<int> digits(num_sensors_, 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    values_[i] = table.global_utility(digits);
    // Odometer increment, last sensor fastest.
    for (std::size_t s = num_sensors_; s-- > 0;) {
      if (++digits[s] < num_states_) break;
      digits[s] = 0;
    }
  }
}

std::uint64_t Landscape::index_of(const Scenario& scenario, const Allocation& allocation) const {
  const auto digits = to_state_indices(scenario, allocation);
  std::uint64_t index = 0;
  for (std::size_t s = 0; s < num_sensors_; ++s) {
    index += static_cast<std::uint64_t>(digits[s]) * weights_[s];
  }
  return index;
}

Allocation Landscape::allocation_at(const Scenario& scenario, std::uint64_t index) const {
  std::vector<int> digits(num_sensors_);
  for (std::size_t s = 0; s < num_sensors_; ++s) {
    digits[s] = static_cast<int>((index / weights_[s]) % static_cast<std::uint64_t>(num_states_));
  }
  return from_state_indices(scenario, digits);
}

bool Landscape::is_local_optimum(std::uint64_t index) const {
  const Utility here = values_[index];
  bool strict = true;
  for_each_neighbor(index, [&](std::uint64_t n) {
    if (!(here > values_[n])) strict = false;
  });
  return strict;
}

std::vector<std::size_t> Landscape::distances_to_local_optima() const {
  std::vector<std::size_t> dist(values_.size(), kNoLocalOptimum);
  std::deque<std::uint64_t> frontier;
  for (std::uint64_t i = 0; i < values_.size(); ++i) {
    if (is_local_optimum(i)) {
      dist[i] = 0;
      frontier.push_back(i);
    }
  }
  // Neighbourhood is symmetric, so a multi-source BFS from the optima gives
  // each allocation its distance to the nearest one.
  while (!frontier.empty()) {
    const std::uint64_t i = frontier.front();
    frontier.pop_front();
    for_each_neighbor(i, [&](std::uint64_t n) {
      if (dist[n] == kNoLocalOptimum) {
        dist[n] = dist[i] + 1;
        frontier.push_back(n);
      }
    });
  }
  return dist;
}

OptimumResult enumerate_optimum(const Scenario& scenario, std::uint64_t budget) {
  const std::uint64_t total = checked_space(scenario, budget);
  const VisibilityTable table(scenario);
  const std::size_t n = scenario.num_sensors();
  const int m = scenario.num_states();

  OptimumResult out;
  std::vector<std::vector<int>> best;
  std::vector<int> digits(n, 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    const Utility gu = table.global_utility(digits);
    ++out.visited;
    if (best.empty() || gu > out.optimum_gu) {
      out.optimum_gu = gu;
      best.clear();
      best.push_back(digits);
    } else if (gu == out.optimum_gu) {
      best.push_back(digits);
    }
    for (std::size_t s = n; s-- > 0;) {
      if (++digits[s] < m) break;
      digits[s] = 0;
    }
  }
  for (const auto& d : best) out.optimum_allocations.push_back(from_state_indices(scenario, d));
  return out;
}

LandscapeCensus census(const Scenario& scenario, std::uint64_t budget) {
  const Landscape land(scenario, budget);
  LandscapeCensus out;
  out.total_allocations = land.size();
  if (land.size() == 0) return out;

  out.optimum_gu = land.gu(0);
  for (std::uint64_t i = 0; i < land.size(); ++i) out.optimum_gu = std::max(out.optimum_gu, land.gu(i));
  for (std::uint64_t i = 0; i < land.size(); ++i) {
    if (land.gu(i) == out.optimum_gu) out.optimum_allocations.push_back(land.allocation_at(scenario, i));
    if (land.is_local_optimum(i)) ++out.local_optima_count;
  }
  out.empirical_lambda =
      static_cast<double>(out.local_optima_count) / static_cast<double>(out.total_allocations);
  if (out.local_optima_count > 0) {
    const auto dist = land.distances_to_local_optima();
    out.max_bfs_distance = *std::max_element(dist.begin(), dist.end());
  }
  return out;
}

std::size_t shortest_distance_to_local_optimum(const Scenario& scenario, const Allocation& from,
                                               std::uint64_t budget) {
  const Landscape land(scenario, budget);
  return land.distances_to_local_optima()[land.index_of(scenario, from)];
}

nlohmann::json census_to_json(const LandscapeCensus& c) {
  nlohmann::json j;
  j["total"] = c.total_allocations;
  j["optimum_gu"] = c.optimum_gu;
  j["optima_count"] = c.local_optima_count;
  j["lambda_empirical"] = c.empirical_lambda;
  if (c.max_bfs_distance == kNoLocalOptimum) {
    j["max_bfs_distance"] = nullptr;
  } else {
    j["max_bfs_distance"] = c.max_bfs_distance;
  }
  return j;
}

}  // namespace svcalloc
