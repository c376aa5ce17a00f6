#include "svcalloc/search.hpp"

namespace svcalloc {

std::vector<NeighborMove> neighbor_moves(const Scenario& scenario, const Allocation& allocation) {
  check_allocation(scenario, allocation);
  std::vector<NeighborMove> moves;
  const int m = scenario.num_states();
  moves.reserve(allocation.size() * static_cast<std::size_t>(m > 0 ? m - 1 : 0));
  for (std::size_t s = 0; s < allocation.size(); ++s) {
    for (int k = 0; k < m; ++k) {
      const SensorState state = scenario.state_at(k);
      if (state != allocation[s]) moves.push_back({s, state});
    }
  }
  return moves;
}

Allocation apply_move(const Allocation& allocation, const NeighborMove& move) {
  Allocation next = allocation;
  next.states.at(move.sensor_index) = move.new_state;
  return next;
}

std::vector<Allocation> neighbors(const Scenario& scenario, const Allocation& allocation) {
  std::vector<Allocation> out;
  for (const auto& move : neighbor_moves(scenario, allocation)) {
    out.push_back(apply_move(allocation, move));
  }
  return out;
}

bool is_local_optimum(const Scenario& scenario, const Allocation& allocation) {
  check_allocation(scenario, allocation);
  const VisibilityTable table(scenario);
  std::vector<int> idx = to_state_indices(scenario, allocation);
  const Utility here = table.global_utility(idx);
  for (std::size_t s = 0; s < idx.size(); ++s) {
    const int current = idx[s];
    for (int k = 0; k < table.num_states(); ++k) {
      if (k == current) continue;
      idx[s] = k;
      const Utility there = table.global_utility(idx);
      idx[s] = current;
      if (!(here > there)) return false;
    }
  }
  return true;
}

Utility consumer_utility(const Scenario& scenario, const Allocation& allocation,
                         std::size_t consumer_index) {
  return target_utility(scenario.utility, coverage_count(scenario, allocation, consumer_index));
}

Allocation individual_hill_climb_step(const Scenario& scenario, const Allocation& allocation,
                                      std::size_t consumer_index, Seed rng_seed) {
  check_allocation(scenario, allocation);
  if (consumer_index >= scenario.num_targets()) {
    throw ContractViolation("consumer index " + std::to_string(consumer_index) + " out of range");
  }
  if (scenario.num_sensors() == 0) return allocation;

  Rng rng(rng_seed);
  const auto sensor = static_cast<std::size_t>(rng.below(scenario.num_sensors()));

  const Utility current = consumer_utility(scenario, allocation, consumer_index);
  Allocation candidate = allocation;
  Utility best = current;
  SensorState best_state = allocation[sensor];
  for (int k = 0; k < scenario.num_states(); ++k) {
    candidate.states[sensor] = scenario.state_at(k);
    const Utility u = consumer_utility(scenario, candidate, consumer_index);
    if (u > best) {
      best = u;
      best_state = candidate.states[sensor];
    }
  }
  if (best <= current) return allocation;
  candidate.states[sensor] = best_state;
  return candidate;
}

SearchOutcome global_hill_climb(const Scenario& scenario, const Allocation& start, Seed rng_seed) {
  check_allocation(scenario, start);
  const VisibilityTable table(scenario);
  Rng rng(rng_seed);

  std::vector<int> idx = to_state_indices(scenario, start);
  SearchOutcome out;
  Utility gu = table.global_utility(idx);
  out.gu_trace.push_back(gu);

  // Moves as (sensor, state index); the current state is skipped while scanning.
  std::vector<std::pair<std::size_t, int>> moves;
  for (std::size_t s = 0; s < idx.size(); ++s) {
    for (int k = 0; k < table.num_states(); ++k) moves.emplace_back(s, k);
  }

  bool improved = true;
  while (improved) {
    improved = false;
    rng.shuffle(std::span(moves));
    for (const auto& [s, k] : moves) {
      if (idx[s] == k) continue;
      const int previous = idx[s];
      idx[s] = k;
      const Utility next = table.global_utility(idx);
      if (next > gu) {
        gu = next;
        out.gu_trace.push_back(gu);
        ++out.steps;
        improved = true;
        break;
      }
      idx[s] = previous;
    }
  }
  out.final_allocation = from_state_indices(scenario, idx);
  out.converged = true;
  return out;
}

}  // namespace svcalloc
