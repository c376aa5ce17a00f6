#include "svcalloc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace svcalloc::theory {

std::int64_t branching_factor(std::int64_t num_sensors, std::int64_t num_states) {
  if (num_sensors < 0) throw std::domain_error("num_sensors must be non-negative");
  if (num_states < 1) throw std::domain_error("num_states must be at least 1");
  return (num_states - 1) * num_sensors;
}

double lambda_prediction(std::int64_t b) {
  if (b < 0) throw std::domain_error("branching factor must be non-negative");
  return std::ldexp(1.0, static_cast<int>(-std::min<std::int64_t>(b, 100000)));
}

Rational lambda_prediction_exact(std::int64_t b) {
  if (b < 0 || b > 62) throw std::domain_error("exact lambda needs 0 <= b <= 62");
  return {1, std::uint64_t{1} << b};
}

double expected_local_optima(double lambda, double total_allocations) {
  return lambda * total_allocations;
}

ClampedProbability pr_local_is_global(double lambda, double total_allocations) {
  const double expected = lambda * total_allocations;
  ClampedProbability p;
  p.raw = expected > 0.0 ? 1.0 / expected : INFINITY;
  p.clamped = !(p.raw <= 1.0);
  p.value = p.clamped ? 1.0 : p.raw;
  return p;
}

double expected_distance_bound(std::int64_t b) {
  if (b < 2) {
    throw std::domain_error("distance bound needs branching factor >= 2, got " + std::to_string(b));
  }
  const double bd = static_cast<double>(b);
  return bd * std::log(2.0) / std::log(bd);
}

TheoryReport make_report(std::int64_t num_sensors, std::int64_t num_states) {
  TheoryReport r;
  r.num_sensors = num_sensors;
  r.num_states = num_states;
  r.branching_factor = branching_factor(num_sensors, num_states);
  r.lambda = lambda_prediction(r.branching_factor);
  r.total_allocations = std::pow(static_cast<double>(num_states), static_cast<double>(num_sensors));
  r.expected_local_optima = expected_local_optima(r.lambda, r.total_allocations);
  r.pr_local_is_global = pr_local_is_global(r.lambda, r.total_allocations);
  r.inverse_two_pow_b = r.lambda;
  r.alt_total_allocations =
      std::pow(static_cast<double>(r.branching_factor), static_cast<double>(num_sensors));
  r.alt_expected_local_optima = expected_local_optima(r.lambda, r.alt_total_allocations);
  if (r.branching_factor >= 2) r.expected_distance_bound = expected_distance_bound(r.branching_factor);
  return r;
}

nlohmann::json report_to_json(const TheoryReport& r) {
  nlohmann::json j;
  j["num_sensors"] = r.num_sensors;
  j["num_states"] = r.num_states;
  j["branching_factor"] = r.branching_factor;
  j["lambda"] = r.lambda;
  j["total_allocations"] = r.total_allocations;
  j["expected_local_optima"] = r.expected_local_optima;
  j["pr_local_is_global"] = r.pr_local_is_global.value;
  j["pr_local_is_global_raw"] = r.pr_local_is_global.raw;
  j["pr_local_is_global_clamped"] = r.pr_local_is_global.clamped;
  j["inverse_two_pow_b"] = r.inverse_two_pow_b;
  j["alt_total_allocations_b_pow_s"] = r.alt_total_allocations;
  j["alt_expected_local_optima"] = r.alt_expected_local_optima;
  if (r.expected_distance_bound) {
    j["expected_distance_bound"] = *r.expected_distance_bound;
  } else {
    j["expected_distance_bound"] = nullptr;
  }
  return j;
}

}  // namespace svcalloc::theory
