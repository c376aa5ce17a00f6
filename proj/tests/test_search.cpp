#include <doctest.h>

#include <algorithm>
#include <set>

#include "test_helpers.hpp"

#include "svcalloc/oracle.hpp"
#include "svcalloc/scenario_io.hpp"
#include "svcalloc/search.hpp"

using namespace svcalloc;
using testutil::make_scenario;

namespace {

const auto S0 = SensorState::sector(0);
const auto S1 = SensorState::sector(1);
const auto S2 = SensorState::sector(2);
const auto OFF = SensorState::off();

// Brute-force strict local-optimum check that only uses global_utility.
bool strict_by_enumeration(const Scenario& s, const Allocation& a) {
  const Utility here = global_utility(s, a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int k = 0; k < s.num_states(); ++k) {
      Allocation b = a;
      b.states[i] = s.state_at(k);
      if (b == a) continue;
      if (global_utility(s, b) >= here) return false;
    }
  }
  return true;
}

bool has_improving_neighbor(const Scenario& s, const Allocation& a) {
  const Utility here = global_utility(s, a);
  for (const auto& n : neighbors(s, a)) {
    if (global_utility(s, n) > here) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("neighbors: counts") {
  CHECK(neighbors(make_scenario({{0, 0}}, {}, true), Allocation{{OFF}}).size() == 3);
  std::vector<Point2D> seven(7, Point2D{0, 0});
  const Scenario s7 = make_scenario(seven, {}, false);
  CHECK(neighbors(s7, default_start(s7)).size() == 14);
  CHECK(neighbors(make_scenario({}, {}), Allocation{}).empty());
}

TEST_CASE("neighbors: count formula and symmetry on random instances") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    Scenario s = testutil::random_small_scenario(rng, static_cast<int>(rng.below(6)), 2, 5.0,
                                                 rng.below(2) == 1);
    s.geometry.num_sectors = 1 + static_cast<int>(rng.below(4));
    s.geometry.view_angle_deg = 360.0 / s.geometry.num_sectors;
    const Allocation a = testutil::random_allocation(rng, s);
    const auto ns = neighbors(s, a);
    CHECK(ns.size() == static_cast<std::size_t>(s.num_states() - 1) * s.num_sensors());
    std::set<Allocation> unique(ns.begin(), ns.end());
    CHECK(unique.size() == ns.size());
    for (const auto& n : ns) {
      std::size_t differing = 0;
      for (std::size_t i = 0; i < a.size(); ++i) differing += (a[i] != n[i]);
      CHECK(differing == 1);
      const auto back = neighbors(s, n);
      CHECK(std::find(back.begin(), back.end(), a) != back.end());
    }
  }
}

TEST_CASE("is_local_optimum") {
  SUBCASE("single sensor facing its only target") {
    const Scenario s = make_scenario({{0, 0}}, {{1, 1}}, true);
    CHECK(is_local_optimum(s, Allocation{{S0}}));
    CHECK(strict_by_enumeration(s, Allocation{{S0}}));
    CHECK_FALSE(is_local_optimum(s, Allocation{{S1}}));
    CHECK_FALSE(is_local_optimum(s, Allocation{{OFF}}));
  }
  SUBCASE("an equal neighbor breaks strictness") {
    // Two targets in different sectors of the only sensor: {0} and {1} tie.
    const Scenario s = make_scenario({{0, 0}}, {{1, 1}, {-1, -1}});
    CHECK(global_utility(s, Allocation{{S0}}) == global_utility(s, Allocation{{S1}}));
    CHECK_FALSE(is_local_optimum(s, Allocation{{S0}}));
  }
  SUBCASE("no sensors") { CHECK(is_local_optimum(make_scenario({}, {{1, 1}}), Allocation{})); }
  SUBCASE("agrees with enumeration") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const Scenario s = testutil::random_small_scenario(rng, 1 + static_cast<int>(rng.below(3)), 3,
                                                         4.0, rng.below(2) == 1);
      const Allocation a = testutil::random_allocation(rng, s);
      CHECK(is_local_optimum(s, a) == strict_by_enumeration(s, a));
    }
  }
}

TEST_CASE("individual_hill_climb_step") {
  SUBCASE("target out of every sensor's range") {
    const Scenario s = make_scenario({{0, 0}, {1, 0}}, {{9, 9}});
    const Allocation a = default_start(s);
    for (Seed seed = 0; seed < 10; ++seed) CHECK(individual_hill_climb_step(s, a, 0, seed) == a);
  }
  SUBCASE("sensor facing away turns to the target") {
    // Target at bearing 200 deg sits in sector 1.
    const Scenario s = make_scenario({{0, 0}}, {{-2, -0.7}});
    CHECK(individual_hill_climb_step(s, Allocation{{S2}}, 0, 1) == Allocation{{S1}});
  }
  SUBCASE("already facing the target") {
    const Scenario s = make_scenario({{0, 0}}, {{1, 1}});
    CHECK(individual_hill_climb_step(s, Allocation{{S0}}, 0, 5) == Allocation{{S0}});
  }
  SUBCASE("bad consumer index") {
    const Scenario s = make_scenario({{0, 0}}, {{1, 1}});
    CHECK_THROWS_AS(individual_hill_climb_step(s, Allocation{{S0}}, 4, 5), ContractViolation);
  }
  SUBCASE("never lowers the acting consumer's utility") {
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
      const Scenario s = testutil::random_small_scenario(rng, 1 + static_cast<int>(rng.below(4)),
                                                         1 + static_cast<int>(rng.below(4)), 5.0,
                                                         rng.below(2) == 1);
      const Allocation a = testutil::random_allocation(rng, s);
      const auto c = static_cast<std::size_t>(rng.below(s.num_targets()));
      const Allocation b = individual_hill_climb_step(s, a, c, rng.next());
      CHECK(consumer_utility(s, b, c) >= consumer_utility(s, a, c));
      std::size_t differing = 0;
      for (std::size_t i = 0; i < a.size(); ++i) differing += (a[i] != b[i]);
      CHECK(differing <= 1);
    }
  }
}

TEST_CASE("individual hill climbing can lower global utility") {
  const Scenario s = load_scenario(SVCALLOC_DATA_DIR "/scenarios/individual_hc_counterexample.json");
  const Allocation a{{S0}};  // covers targets 0 and 1
  const Allocation b = individual_hill_climb_step(s, a, 2, 0);
  CHECK(b == Allocation{{S1}});
  CHECK(global_utility(s, a) == 19);
  CHECK(global_utility(s, b) == 9);
  CHECK(consumer_utility(s, b, 2) > consumer_utility(s, a, 2));
}

TEST_CASE("global_hill_climb: fixtures") {
  SUBCASE("start at a local optimum") {
    const Scenario s = make_scenario({{0, 0}}, {{1, 1}}, true);
    const auto out = global_hill_climb(s, Allocation{{S0}}, 42);
    CHECK(out.steps == 0);
    CHECK(out.final_allocation == Allocation{{S0}});
    CHECK(out.gu_trace.size() == 1);
    CHECK(out.converged);
  }
  SUBCASE("no targets drives every sensor off") {
    Rng rng(8);
    for (int n = 1; n <= 3; ++n) {
      const Scenario s = testutil::random_small_scenario(rng, n, 0, 5.0, true);
      const auto census_result = census(s);
      REQUIRE(census_result.optimum_allocations.size() == 1);
      CHECK(census_result.optimum_allocations[0] == default_start(s));
      CHECK(census_result.optimum_gu == 0);
      for (Seed seed = 0; seed < 5; ++seed) {
        Allocation start;
        for (int i = 0; i < n; ++i) start.states.push_back(S2);
        const auto out = global_hill_climb(s, start, seed);
        CHECK(out.final_allocation == default_start(s));
        CHECK(out.gu_trace.back() == 0);
      }
    }
  }
  SUBCASE("single sensor ends facing the target") {
    const Scenario s = make_scenario({{0, 0}}, {{-2, -0.7}}, true);
    for (Seed seed = 0; seed < 10; ++seed) {
      const auto out = global_hill_climb(s, default_start(s), seed);
      CHECK(out.final_allocation == Allocation{{S1}});
      CHECK(out.final_allocation == enumerate_optimum(s).optimum_allocations.front());
    }
  }
}

TEST_CASE("global_hill_climb: invariants on random instances") {
  Rng rng(1234);
  for (int trial = 0; trial < 150; ++trial) {
    const Scenario s = testutil::random_small_scenario(rng, 1 + static_cast<int>(rng.below(4)),
                                                       static_cast<int>(rng.below(6)), 4.0,
                                                       rng.below(2) == 1);
    const Allocation start = testutil::random_allocation(rng, s);
    const auto out = global_hill_climb(s, start, rng.next());
    const auto total = *allocation_space_size(s);

    CHECK(out.gu_trace.size() == out.steps + 1);
    CHECK(out.gu_trace.front() == global_utility(s, start));
    CHECK(out.gu_trace.back() == global_utility(s, out.final_allocation));
    for (std::size_t i = 1; i < out.gu_trace.size(); ++i) CHECK(out.gu_trace[i] > out.gu_trace[i - 1]);
    CHECK(out.steps < total);
    CHECK(out.converged);
    // Terminal allocation has no strictly better neighbor; it is a strict
    // local optimum unless it sits on a plateau.
    CHECK_FALSE(has_improving_neighbor(s, out.final_allocation));
    CHECK(out.gu_trace.back() <= enumerate_optimum(s).optimum_gu);
  }
}

TEST_CASE("global_hill_climb is deterministic per seed") {
  Rng rng(77);
  const Scenario s = testutil::random_small_scenario(rng, 4, 5, 4.0, true);
  const Allocation start = testutil::random_allocation(rng, s);
  const auto a = global_hill_climb(s, start, 9);
  const auto b = global_hill_climb(s, start, 9);
  CHECK(a.final_allocation == b.final_allocation);
  CHECK(a.gu_trace == b.gu_trace);
}

TEST_CASE("global_hill_climb on a plateau") {
  // One target in sector 0 and one in sector 1: both sectors give GU 9.
  const Scenario s = make_scenario({{0, 0}}, {{1, 1}, {-1, -1}});
  CHECK(census(s).local_optima_count == 0);
  const auto out = global_hill_climb(s, Allocation{{S2}}, 5);
  CHECK(out.converged);
  CHECK(out.gu_trace == std::vector<Utility>{-1, 9});
  CHECK_FALSE(is_local_optimum(s, out.final_allocation));
  CHECK_FALSE(has_improving_neighbor(s, out.final_allocation));
}
