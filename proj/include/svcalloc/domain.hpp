#pragma once

// World model for the sensor/target service-allocation problem: geometry,
// sensor states, allocations and the utility functions that score them.
//
// Utilities are integer-valued. K1, K2 and bid amounts are integers, so every
// global-utility comparison is exact.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace svcalloc {

using Utility = std::int64_t;

/// Raised when an index or a shape does not match the scenario it refers to.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

struct GeometryParams {
  double view_angle_deg = 120.0;
  double view_range = 3.0;
  int num_sectors = 3;
  double sector_origin_deg = 0.0;

  /// Throws ContractViolation when a field is out of its domain.
  void validate() const;

  friend bool operator==(const GeometryParams&, const GeometryParams&) = default;
};

struct UtilityParams {
  Utility k1 = 1;  // running cost per active sensor
  Utility k2 = 10; // reward for the first detection of a target

  void validate() const;

  friend bool operator==(const UtilityParams&, const UtilityParams&) = default;
};

/// Either a sector index or off. Ordered by state index: sectors first, off last.
class SensorState {
 public:
  static constexpr SensorState sector(int index) { return SensorState(index); }
  static constexpr SensorState off() { return SensorState(kOffValue); }

  constexpr bool is_off() const { return value_ == kOffValue; }
  constexpr int sector_index() const { return value_; }

  std::string to_string() const;

  friend constexpr bool operator==(SensorState a, SensorState b) { return a.value_ == b.value_; }
  friend constexpr std::strong_ordering operator<=>(SensorState a, SensorState b) {
    // Off sorts after every sector.
    auto key = [](SensorState s) { return s.is_off() ? INT32_MAX : s.value_; };
    return key(a) <=> key(b);
  }

 private:
  static constexpr int kOffValue = -1;
  constexpr explicit SensorState(int v) : value_(v) {}
  int value_;
};

struct Scenario {
  std::vector<Point2D> sensors;
  std::vector<Point2D> targets;
  GeometryParams geometry;
  UtilityParams utility;
  bool off_allowed = false;

  std::size_t num_sensors() const { return sensors.size(); }
  std::size_t num_targets() const { return targets.size(); }

  /// Legal states per sensor: every sector, plus off when allowed.
  int num_states() const { return geometry.num_sectors + (off_allowed ? 1 : 0); }

  /// State with the given index in [0, num_states()); index num_sectors is off.
  SensorState state_at(int index) const;
  int state_index(SensorState state) const;
  bool is_legal(SensorState state) const;

  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct Allocation {
  std::vector<SensorState> states;

  std::size_t size() const { return states.size(); }
  SensorState operator[](std::size_t i) const { return states[i]; }

  std::string to_string() const;

  friend bool operator==(const Allocation&, const Allocation&) = default;
  friend auto operator<=>(const Allocation& a, const Allocation& b) {
    return a.states <=> b.states;
  }
};

/// All sensors at sector 0 when off is not allowed, all off otherwise.
Allocation default_start(const Scenario& scenario);

/// Throws ContractViolation unless the allocation has one legal state per sensor.
void check_allocation(const Scenario& scenario, const Allocation& allocation);

double distance(Point2D a, Point2D b);

/// Counter-clockwise angle from the positive x-axis, in [0, 360).
double bearing_deg(Point2D from, Point2D to);

bool sees(const Scenario& scenario, std::size_t sensor_index, SensorState state,
          std::size_t target_index);

int coverage_count(const Scenario& scenario, const Allocation& allocation,
                   std::size_t target_index);

Utility sensor_utility(const UtilityParams& params, SensorState state);

/// 0 for no coverage, K2 for one sensor, K2 + f - 2 for f >= 2.
Utility target_utility(const UtilityParams& params, int f);

Utility global_utility(const Scenario& scenario, const Allocation& allocation);

/// GU(a') - GU(a) where a' is `allocation` with one sensor moved to `new_state`.
Utility global_utility_delta(const Scenario& scenario, const Allocation& allocation,
                             std::size_t sensor_index, SensorState new_state);

/// Precomputed sees() for every (sensor, state, target) triple of a scenario.
/// Search, oracle and protocol code evaluate GU many times per scenario.
class VisibilityTable {
 public:
  explicit VisibilityTable(const Scenario& scenario);

  bool sees(std::size_t sensor, int state_index, std::size_t target) const {
    return seen_[(sensor * num_states_ + static_cast<std::size_t>(state_index)) * num_targets_ +
                 target] != 0;
  }

  std::size_t num_sensors() const { return num_sensors_; }
  std::size_t num_targets() const { return num_targets_; }
  int num_states() const { return static_cast<int>(num_states_); }

  /// GU of an allocation given as state indices.
  Utility global_utility(const std::vector<int>& state_indices) const;

 private:
  std::size_t num_sensors_;
  std::size_t num_targets_;
  std::size_t num_states_;
  int off_index_;
  UtilityParams utility_;
  std::vector<char> seen_;
};

std::vector<int> to_state_indices(const Scenario& scenario, const Allocation& allocation);
Allocation from_state_indices(const Scenario& scenario, const std::vector<int>& indices);

}  // namespace svcalloc
