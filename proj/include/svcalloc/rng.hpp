#pragma once

// Seeded random streams. Seeds are derived by hashing (master seed, role,
// coordinates) with the SplitMix64 finalizer, so every placement and every
// run owns an independent stream regardless of execution order.
//
// Only mt19937_64's raw output is consumed (its sequence is fixed by the
// standard); the conversions to doubles and bounded integers are done here
// so results do not depend on the standard library's distributions.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace svcalloc {

using Seed = std::uint64_t;

enum class SeedRole : std::uint64_t {
  kPlacement = 1,
  kProtocolRun = 2,
  kHillClimb = 3,
  kIndividualStep = 4,
  kScenarioSample = 5,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr Seed derive_seed(Seed master, SeedRole role, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(role));
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k));
  return h;
}

class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return p > 0.0 && uniform01() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace svcalloc
