#include "svcalloc/domain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace svcalloc {

namespace {

double normalize_deg(double angle) {
  double r = std::fmod(angle, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative value can round up to exactly 360.
  if (r >= 360.0) r -= 360.0;
  return r;
}

void check_sensor(const Scenario& scenario, std::size_t sensor_index) {
  if (sensor_index >= scenario.num_sensors()) {
    throw ContractViolation("sensor index " + std::to_string(sensor_index) +
                            " out of range (" + std::to_string(scenario.num_sensors()) +
                            " sensors)");
  }
}

void check_target(const Scenario& scenario, std::size_t target_index) {
  if (target_index >= scenario.num_targets()) {
    throw ContractViolation("target index " + std::to_string(target_index) +
                            " out of range (" + std::to_string(scenario.num_targets()) +
                            " targets)");
  }
}

}  // namespace

void GeometryParams::validate() const {
  if (!(std::isfinite(view_angle_deg) && view_angle_deg > 0.0)) {
    throw ContractViolation("view_angle must be positive");
  }
  if (!(std::isfinite(view_range) && view_range > 0.0)) {
    throw ContractViolation("view_range must be positive");
  }
  if (num_sectors < 1) throw ContractViolation("num_sectors must be at least 1");
  if (!std::isfinite(sector_origin_deg)) throw ContractViolation("sector_origin must be finite");
}

void UtilityParams::validate() const {
  if (k1 < 0) throw ContractViolation("k1 must be non-negative");
  if (k2 < 0) throw ContractViolation("k2 must be non-negative");
}

std::string SensorState::to_string() const {
  return is_off() ? std::string("off") : std::to_string(value_);
}

SensorState Scenario::state_at(int index) const {
  if (index < 0 || index >= num_states()) {
    throw ContractViolation("state index " + std::to_string(index) + " out of range");
  }
  return index == geometry.num_sectors ? SensorState::off() : SensorState::sector(index);
}

int Scenario::state_index(SensorState state) const {
  if (!is_legal(state)) throw ContractViolation("illegal sensor state " + state.to_string());
  return state.is_off() ? geometry.num_sectors : state.sector_index();
}

bool Scenario::is_legal(SensorState state) const {
  if (state.is_off()) return off_allowed;
  return state.sector_index() >= 0 && state.sector_index() < geometry.num_sectors;
}

void Scenario::validate() const {
  geometry.validate();
  utility.validate();
  for (const auto& p : sensors) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ContractViolation("sensor coordinates must be finite");
    }
  }
  for (const auto& p : targets) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ContractViolation("target coordinates must be finite");
    }
  }
}

std::string Allocation::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) out << ' ';
    out << states[i].to_string();
  }
  out << ']';
  return out.str();
}

Allocation default_start(const Scenario& scenario) {
  const SensorState s = scenario.off_allowed ? SensorState::off() : SensorState::sector(0);
  return Allocation{std::vector<SensorState>(scenario.num_sensors(), s)};
}

void check_allocation(const Scenario& scenario, const Allocation& allocation) {
  if (allocation.size() != scenario.num_sensors()) {
    throw ContractViolation("allocation has " + std::to_string(allocation.size()) +
                            " states but scenario has " + std::to_string(scenario.num_sensors()) +
                            " sensors");
  }
  for (std::size_t i = 0; i < allocation.size(); ++i) {
    if (!scenario.is_legal(allocation[i])) {
      throw ContractViolation("sensor " + std::to_string(i) + " has illegal state " +
                              allocation[i].to_string());
    }
  }
}

double distance(Point2D a, Point2D b) { return std::hypot(b.x - a.x, b.y - a.y); }

double bearing_deg(Point2D from, Point2D to) {
  const double rad = std::atan2(to.y - from.y, to.x - from.x);
  return normalize_deg(rad * 180.0 / std::numbers::pi);
}

bool sees(const Scenario& scenario, std::size_t sensor_index, SensorState state,
          std::size_t target_index) {
  check_sensor(scenario, sensor_index);
  check_target(scenario, target_index);
  if (state.is_off()) return false;
  if (state.sector_index() < 0 || state.sector_index() >= scenario.geometry.num_sectors) {
    throw ContractViolation("sector " + state.to_string() + " out of range");
  }
  const Point2D s = scenario.sensors[sensor_index];
  const Point2D t = scenario.targets[target_index];
  const double d = distance(s, t);
  if (d > scenario.geometry.view_range) return false;
  if (d == 0.0) return true;
  const auto& g = scenario.geometry;
  const double low = g.sector_origin_deg + state.sector_index() * g.view_angle_deg;
  const double offset = normalize_deg(bearing_deg(s, t) - low);
  return offset < g.view_angle_deg;
}

int coverage_count(const Scenario& scenario, const Allocation& allocation,
                   std::size_t target_index) {
  check_target(scenario, target_index);
  check_allocation(scenario, allocation);
  int f = 0;
  for (std::size_t s = 0; s < scenario.num_sensors(); ++s) {
    if (sees(scenario, s, allocation[s], target_index)) ++f;
  }
  return f;
}

Utility sensor_utility(const UtilityParams& params, SensorState state) {
  return state.is_off() ? 0 : -params.k1;
}

Utility target_utility(const UtilityParams& params, int f) {
  if (f < 0) throw ContractViolation("coverage count must be non-negative");
  if (f == 0) return 0;
  if (f == 1) return params.k2;
  return params.k2 + f - 2;
}

Utility global_utility(const Scenario& scenario, const Allocation& allocation) {
  check_allocation(scenario, allocation);
  Utility total = 0;
  for (std::size_t c = 0; c < scenario.num_targets(); ++c) {
    total += target_utility(scenario.utility, coverage_count(scenario, allocation, c));
  }
  for (std::size_t s = 0; s < scenario.num_sensors(); ++s) {
    total += sensor_utility(scenario.utility, allocation[s]);
  }
  return total;
}

Utility global_utility_delta(const Scenario& scenario, const Allocation& allocation,
                             std::size_t sensor_index, SensorState new_state) {
  check_allocation(scenario, allocation);
  check_sensor(scenario, sensor_index);
  if (!scenario.is_legal(new_state)) {
    throw ContractViolation("illegal sensor state " + new_state.to_string());
  }
  const SensorState old_state = allocation[sensor_index];
  Utility delta = sensor_utility(scenario.utility, new_state) -
                  sensor_utility(scenario.utility, old_state);
  // Only targets whose visibility from this sensor changes are affected.
  for (std::size_t c = 0; c < scenario.num_targets(); ++c) {
    const bool before = sees(scenario, sensor_index, old_state, c);
    const bool after = sees(scenario, sensor_index, new_state, c);
    if (before == after) continue;
    const int f = coverage_count(scenario, allocation, c);
    const int f_new = f + (after ? 1 : -1);
    delta += target_utility(scenario.utility, f_new) - target_utility(scenario.utility, f);
  }
  return delta;
}

VisibilityTable::VisibilityTable(const Scenario& scenario)
    : num_sensors_(scenario.num_sensors()),
      num_targets_(scenario.num_targets()),
      num_states_(static_cast<std::size_t>(scenario.num_states())),
      off_index_(scenario.off_allowed ? scenario.geometry.num_sectors : -1),
      utility_(scenario.utility),
      seen_(num_sensors_ * num_states_ * num_targets_, 0) {
  for (std::size_t s = 0; s < num_sensors_; ++s) {
    for (std::size_t k = 0; k < num_states_; ++k) {
      const SensorState state = scenario.state_at(static_cast<int>(k));
      for (std::size_t c = 0; c < num_targets_; ++c) {
        seen_[(s * num_states_ + k) * num_targets_ + c] = svcalloc::sees(scenario, s, state, c);
      }
    }
  }
}

Utility VisibilityTable::global_utility(const std::vector<int>& state_indices) const {
  Utility total = 0;
  for (std::size_t s = 0; s < num_sensors_; ++s) {
    if (state_indices[s] != off_index_) total -= utility_.k1;
  }
  for (std::size_t c = 0; c < num_targets_; ++c) {
    int f = 0;
    for (std::size_t s = 0; s < num_sensors_; ++s) {
      if (sees(s, state_indices[s], c)) ++f;
    }
    total += target_utility(utility_, f);
  }
  return total;
}

std::vector<int> to_state_indices(const Scenario& scenario, const Allocation& allocation) {
  check_allocation(scenario, allocation);
  std::vector<int> out(allocation.size());
  for (std::size_t i = 0; i < allocation.size(); ++i) out[i] = scenario.state_index(allocation[i]);
  return out;
}

Allocation from_state_indices(const Scenario& scenario, const std::vector<int>& indices) {
  Allocation a;
  a.states.reserve(indices.size());
  for (int k : indices) a.states.push_back(scenario.state_at(k));
  return a;
}

}  // namespace svcalloc
