#pragma once

// Closed-form landscape predictions for global hill climbing under the
// assumption that neighboring allocations have uncorrelated utilities.

#include <cstdint>
#include <optional>

#include <json.hpp>

namespace svcalloc::theory {

/// Exact 1 / 2^b, representable for b <= 62.
struct Rational {
  std::uint64_t numerator = 1;
  std::uint64_t denominator = 1;
};

/// Neighbors of any allocation: (num_states - 1) * num_sensors.
std::int64_t branching_factor(std::int64_t num_sensors, std::int64_t num_states);

/// Probability that an allocation beats all b neighbors: (1/2)^b.
double lambda_prediction(std::int64_t b);
Rational lambda_prediction_exact(std::int64_t b);

double expected_local_optima(double lambda, double total_allocations);

struct ClampedProbability {
  double value = 1.0;   // min(1, raw)
  double raw = 1.0;     // 1 / (lambda * |A|) as written
  bool clamped = false;
};

ClampedProbability pr_local_is_global(double lambda, double total_allocations);

/// b * log_b(2); throws std::domain_error for b < 2.
double expected_distance_bound(std::int64_t b);

struct TheoryReport {
  std::int64_t num_sensors = 0;
  std::int64_t num_states = 0;
  std::int64_t branching_factor = 0;
  double lambda = 1.0;
  double total_allocations = 1.0;         // num_states^num_sensors
  double expected_local_optima = 0.0;
  ClampedProbability pr_local_is_global;
  double inverse_two_pow_b = 1.0;         // the 1/2^b form, reported alongside
  double alt_total_allocations = 1.0;     // b^|S|, the alternative state-space count
  double alt_expected_local_optima = 0.0; // lambda * b^|S|
  std::optional<double> expected_distance_bound;  // only for b >= 2
};

TheoryReport make_report(std::int64_t num_sensors, std::int64_t num_states);

nlohmann::json report_to_json(const TheoryReport& report);

}  // namespace svcalloc::theory
