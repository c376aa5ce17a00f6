#pragma once

// Single-sensor neighbourhood over allocations plus the individual and
// global hill-climbing algorithms.

#include <cstddef>
#include <vector>

#include "svcalloc/domain.hpp"
#include "svcalloc/rng.hpp"

namespace svcalloc {

struct NeighborMove {
  std::size_t sensor_index = 0;
  SensorState new_state = SensorState::sector(0);

  friend bool operator==(const NeighborMove&, const NeighborMove&) = default;
};

struct SearchOutcome {
  Allocation final_allocation;
  std::vector<Utility> gu_trace;  // initial GU, then one entry per accepted step
  std::size_t steps = 0;
  bool converged = false;
};

/// Every move that changes exactly one sensor, ordered by (sensor, state index).
std::vector<NeighborMove> neighbor_moves(const Scenario& scenario, const Allocation& allocation);

Allocation apply_move(const Allocation& allocation, const NeighborMove& move);

/// All allocations differing from `allocation` in exactly one sensor's state.
/// There are (m - 1) * |S| of them, m being the number of legal states.
std::vector<Allocation> neighbors(const Scenario& scenario, const Allocation& allocation);

/// Strict local optimum: GU(a) > GU(a') for every neighbor a'.
bool is_local_optimum(const Scenario& scenario, const Allocation& allocation);

/// U_c of one target under an allocation.
Utility consumer_utility(const Scenario& scenario, const Allocation& allocation,
                         std::size_t consumer_index);

/// The consumer picks one sensor uniformly at random and sets it to the state
/// maximizing its own utility, provided that strictly improves it. Otherwise
/// the allocation is returned unchanged.
Allocation individual_hill_climb_step(const Scenario& scenario, const Allocation& allocation,
                                      std::size_t consumer_index, Seed rng_seed);

/// First-improvement hill climbing on GU. Each pass visits all moves in a
/// freshly shuffled order and takes the first strictly improving one; the
/// search stops when a full pass finds none.
SearchOutcome global_hill_climb(const Scenario& scenario, const Allocation& start, Seed rng_seed);

}  // namespace svcalloc
