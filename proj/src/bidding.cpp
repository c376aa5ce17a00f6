#include "svcalloc/bidding.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace svcalloc {

void RoundConfig::validate() const {
  if (max_rounds < 1) throw ContractViolation("max_rounds must be positive");
  if (quiescence_rounds < 1) throw ContractViolation("quiescence_rounds must be positive");
  if (quiescence_rounds > max_rounds) {
    throw ContractViolation("quiescence_rounds must not exceed max_rounds");
  }
  if (!(miss_probability >= 0.0 && miss_probability <= 1.0)) {
    throw ContractViolation("miss_probability must lie in [0, 1]");
  }
}

std::vector<std::size_t> select_neighbors(const Scenario& scenario, std::size_t target_index,
                                          std::size_t k) {
  if (target_index >= scenario.num_targets()) {
    throw ContractViolation("target index " + std::to_string(target_index) + " out of range");
  }
  if (k < 1 || k > scenario.num_sensors()) {
    throw ContractViolation("neighbor count " + std::to_string(k) + " outside [1, " +
                            std::to_string(scenario.num_sensors()) + "]");
  }
  const Point2D t = scenario.targets[target_index];
  std::vector<std::size_t> order(scenario.num_sensors());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> dist(order.size());
  for (std::size_t s = 0; s < order.size(); ++s) dist[s] = distance(scenario.sensors[s], t);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  order.resize(k);
  return order;
}

std::optional<SensorState> desired_sector(const Scenario& scenario, std::size_t sensor_index,
                                          std::size_t target_index) {
  for (int k = 0; k < scenario.geometry.num_sectors; ++k) {
    const auto sector = SensorState::sector(k);
    if (sees(scenario, sensor_index, sector, target_index)) return sector;
  }
  return std::nullopt;
}

PartialAllocation neighbor_view(const Allocation& allocation,
                                const std::vector<std::size_t>& known_sensors) {
  PartialAllocation view(allocation.size());
  for (std::size_t s : known_sensors) view.at(s) = allocation[s];
  return view;
}

namespace {

int view_coverage(const Scenario& scenario, const PartialAllocation& view,
                  std::size_t target_index) {
  int f = 0;
  for (std::size_t s = 0; s < view.size(); ++s) {
    if (view[s] && sees(scenario, s, *view[s], target_index)) ++f;
  }
  return f;
}

}  // namespace

std::optional<BidMessage> compute_bid(const Scenario& scenario, const PartialAllocation& view,
                                      const BidPolicy& policy, std::size_t target_index,
                                      std::size_t sensor_index) {
  if (view.size() != scenario.num_sensors()) {
    throw ContractViolation("view size does not match the number of sensors");
  }
  const auto sector = desired_sector(scenario, sensor_index, target_index);
  if (!sector) return std::nullopt;

  BidMessage bid{target_index, sensor_index, *sector, 0};
  if (policy.mode == BidMode::kFixed) {
    bid.amount = policy.fixed_amount;
    return bid;
  }
  const int f_now = view_coverage(scenario, view, target_index);
  PartialAllocation switched = view;
  switched[sensor_index] = *sector;
  const int f_switched = view_coverage(scenario, switched, target_index);
  const Utility gain = target_utility(scenario.utility, f_switched) -
                       target_utility(scenario.utility, f_now);
  bid.amount = std::max<Utility>(0, gain);
  return bid;
}

SensorState sensor_decide(SensorState current, const std::vector<BidMessage>& received) {
  if (received.empty()) return current;
  std::map<int, Utility> aggregate;  // ordered by sector index
  for (const auto& bid : received) aggregate[bid.sector.sector_index()] += bid.amount;
  auto best = aggregate.begin();
  for (auto it = aggregate.begin(); it != aggregate.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return SensorState::sector(best->first);
}

std::optional<double> alpha_ratio(Utility gu, Utility optimum_gu) {
  if (optimum_gu <= 0) return std::nullopt;
  return static_cast<double>(gu) / static_cast<double>(optimum_gu);
}

RunTrace run_protocol(const Scenario& scenario, const Allocation& start, const BidPolicy& policy,
                      const RoundConfig& config, Seed rng_seed, std::optional<Utility> optimum_gu) {
  check_allocation(scenario, start);
  config.validate();
  const std::size_t num_sensors = scenario.num_sensors();
  const std::size_t num_targets = scenario.num_targets();
  if (num_targets > 0 && (policy.neighbor_count < 1 || policy.neighbor_count > num_sensors)) {
    throw ContractViolation("neighbor count " + std::to_string(policy.neighbor_count) +
                            " outside [1, " + std::to_string(num_sensors) + "]");
  }

  std::vector<std::vector<std::size_t>> selected(num_targets);
  for (std::size_t c = 0; c < num_targets; ++c) {
    selected[c] = select_neighbors(scenario, c, policy.neighbor_count);
  }

  Rng rng(rng_seed);
  RunTrace trace;
  auto record = [&](int round, const Allocation& a) {
    const Utility gu = global_utility(scenario, a);
    std::optional<double> alpha;
    if (optimum_gu) alpha = alpha_ratio(gu, *optimum_gu);
    trace.rounds.push_back({round, a, gu, alpha});
  };

  Allocation current = start;
  record(0, current);
  int quiet = 0;
  for (int round = 1; round <= config.max_rounds; ++round) {
    std::vector<std::vector<BidMessage>> inbox(num_sensors);
    for (std::size_t c = 0; c < num_targets; ++c) {
      const PartialAllocation view = neighbor_view(current, selected[c]);
      for (std::size_t s : selected[c]) {
        auto bid = compute_bid(scenario, view, policy, c, s);
        if (!bid) continue;
        if (rng.bernoulli(config.miss_probability)) continue;
        inbox[s].push_back(*bid);
      }
    }
    Allocation next = current;
    for (std::size_t s = 0; s < num_sensors; ++s) next.states[s] = sensor_decide(current[s], inbox[s]);

    quiet = (next == current) ? quiet + 1 : 0;
    current = std::move(next);
    record(round, current);
    trace.rounds_executed = round;
    if (quiet >= config.quiescence_rounds) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

double gu_decrease_fraction(const RunTrace& trace) {
  if (trace.rounds.size() < 2) return 0.0;
  std::size_t decreases = 0;
  for (std::size_t i = 1; i < trace.rounds.size(); ++i) {
    if (trace.rounds[i].gu < trace.rounds[i - 1].gu) ++decreases;
  }
  return static_cast<double>(decreases) / static_cast<double>(trace.rounds.size() - 1);
}

}  // namespace svcalloc
