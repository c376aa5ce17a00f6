// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "test_helpers.hpp"

#include "svcalloc/experiment.hpp"
#include "svcalloc/oracle.hpp"
#include "svcalloc/scenario_io.hpp"
#include "svcalloc/search.hpp"
#include "svcalloc/theory.hpp"

using namespace svcalloc;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

Verdict phase_transition() {
  const ExperimentConfig config = load_experiment_config(SVCALLOC_CONFIG_DIR "/paper.json");
  const SweepResult result = run_sweep(config);
  std::ostringstream d;
  d.precision(3);
  for (int k : config.neighbor_counts) d << "k=" << k << ":" << result.fraction_optimal(k) << ' ';
  const double f1 = result.fraction_optimal(1);
  const double f3 = result.fraction_optimal(3);
  const double f5 = result.fraction_optimal(5);
  Verdict v;
  v.pass = f5 >= 0.90 && f1 <= 0.50 && f5 - f3 >= 0.30;
  d << "| need k5>=0.90 (" << (f5 >= 0.90 ? "ok" : "no") << "), k1<=0.50 ("
    << (f1 <= 0.50 ? "ok" : "no") << "), k5-k3>=0.30 (" << (f5 - f3 >= 0.30 ? "ok" : "no") << ")";
  v.detail = d.str();
  return v;
}

Verdict oracle_exactness() {
  ExperimentConfig config;  // 7 sensors, 7 targets, 3 sectors
  config.master_seed = 20240611;
  config.placements = 20;
  Verdict v;
  int matched = 0;
  for (int p = 0; p < 20; ++p) {
    const Scenario s = random_scenario(config, p);
    const OptimumResult r = enumerate_optimum(s);
    const naive::Optimum ref = naive::brute_force(testutil::to_naive(s));
    if (r.visited == 2187 && ref.visited == 2187 && r.optimum_gu == ref.best) {
      ++matched;
    } else {
      v.pass = false;
    }
  }
  v.detail = std::to_string(matched) + "/20 placements: 2187 visited, optimum equals naive evaluator";
  return v;
}

Verdict hill_climb_soundness() {
  Rng rng(5150);
  int strict_ok = 0;
  int weak_ok = 0;
  int increasing_ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int sensors = 1 + static_cast<int>(rng.below(4));
    const int targets = 1 + static_cast<int>(rng.below(6));
    const Scenario s = testutil::random_small_scenario(rng, sensors, targets, 5.0, true);
    const Allocation start = testutil::random_allocation(rng, s);
    const SearchOutcome out = global_hill_climb(s, start, rng.next());

    const Landscape land(s);
    const std::uint64_t idx = land.index_of(s, out.final_allocation);
    if (land.is_local_optimum(idx)) ++strict_ok;
    bool improvable = false;
    land.for_each_neighbor(idx, [&](std::uint64_t n) { improvable |= land.gu(n) > land.gu(idx); });
    if (!improvable) ++weak_ok;

    bool increasing = out.gu_trace.back() == global_utility(s, out.final_allocation);
    for (std::size_t i = 1; i < out.gu_trace.size(); ++i) {
      increasing &= out.gu_trace[i] > out.gu_trace[i - 1];
    }
    if (increasing) ++increasing_ok;
  }
  Verdict v;
  v.pass = strict_ok == 50 && increasing_ok == 50;
  v.detail = std::to_string(strict_ok) + "/50 strict local optima, " + std::to_string(increasing_ok) +
             "/50 strictly increasing traces (info: " + std::to_string(weak_ok) +
             "/50 have no improving neighbor)";
  return v;
}

Verdict counterexample() {
  const Scenario s = load_scenario(SVCALLOC_DATA_DIR "/scenarios/individual_hc_counterexample.json");
  const Allocation start = default_start(s);
  Verdict v;
  v.pass = false;
  for (std::size_t c = 0; c < s.num_targets(); ++c) {
    const Allocation next = individual_hill_climb_step(s, start, c, 0);
    const Utility before = global_utility(s, start);
    const Utility after = global_utility(s, next);
    if (after < before && consumer_utility(s, next, c) > consumer_utility(s, start, c)) {
      v.pass = true;
      v.detail = "target " + std::to_string(c) + " step: " + start.to_string() + " GU " +
                 std::to_string(before) + " -> " + next.to_string() + " GU " + std::to_string(after);
      break;
    }
  }
  if (!v.pass) v.detail = "no individual step lowers GU";
  return v;
}

Verdict theory_formulas() {
  using namespace svcalloc::theory;
  std::vector<std::string> failures;
  const auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  expect(expected_distance_bound(2) == 2.0, "d(2) == 2.0");
  const double d21 = 21.0 * std::numbers::ln2 / std::log(21.0);
  expect(std::abs(expected_distance_bound(21) - d21) <= 1e-9, "d(21)");
  const Rational l21 = lambda_prediction_exact(21);
  expect(l21.numerator == 1 && l21.denominator == (std::uint64_t{1} << 21), "lambda(21) * 2^21 == 1");
  expect(lambda_prediction(21) * 2097152.0 == 1.0, "lambda(21) as double");
  expect(lambda_prediction(2) == 0.25, "lambda(2)");
  expect(expected_local_optima(0.25, 16.0) == 4.0, "E[#local optima] for b=2, |A|=16");
  const auto pr = pr_local_is_global(0.25, 16.0);
  expect(pr.value == 0.25 && !pr.clamped, "Pr for b=2, |A|=16");
  const auto pr21 = pr_local_is_global(lambda_prediction(21), 2187.0);
  expect(pr21.clamped && pr21.value == 1.0 && pr21.raw == 2097152.0 / 2187.0, "Pr clamped for b=21");
  expect(branching_factor(7, 4) == 21, "b for 7 sensors, 4 states");

  Verdict v;
  v.pass = failures.empty();
  if (v.pass) {
    v.detail = "d(2)=2, |d(21)-21ln2/ln21|<=1e-9, lambda(21)=1/2^21 exactly";
  } else {
    for (const auto& f : failures) v.detail += f + "; ";
  }
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  const fs::path base = fs::temp_directory_path() / "svcalloc_acceptance_determinism";
  fs::remove_all(base);
  Verdict v;
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string("\"") + SVCALLOC_CLI_PATH + "\" sweep --config \"" +
                            SVCALLOC_CONFIG_DIR "/paper.json\" --out \"" + (base / run).string() +
                            "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) {
      v.pass = false;
      v.detail = "sweep exited with an error";
      return v;
    }
  }
  for (const char* name : {"traces.csv", "summary.csv", "histogram.csv"}) {
    const std::string a = slurp(base / "a" / name);
    const std::string b = slurp(base / "b" / name);
    if (a.empty() || a != b) {
      v.pass = false;
      v.detail += std::string(name) + " differs; ";
    }
  }
  if (v.pass) v.detail = "traces.csv, summary.csv, histogram.csv byte-identical across two runs";
  fs::remove_all(base);
  return v;
}

Verdict neighborhood_algebra() {
  Rng rng(1000);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int sensors = 1 + static_cast<int>(rng.below(7));
    const int targets = static_cast<int>(rng.below(8));
    Scenario s = testutil::random_small_scenario(rng, sensors, targets, 8.0, rng.below(2) == 1);
    s.geometry.num_sectors = 1 + static_cast<int>(rng.below(5));
    const Allocation a = testutil::random_allocation(rng, s);
    const auto ns = neighbors(s, a);
    const std::size_t expected = static_cast<std::size_t>(s.num_states() - 1) * s.num_sensors();
    bool ok = ns.size() == expected;
    std::set<Allocation> distinct(ns.begin(), ns.end());
    ok &= distinct.size() == ns.size() && !distinct.contains(a);
    for (const auto& b : ns) {
      int differing = 0;
      for (std::size_t i = 0; i < a.size(); ++i) differing += a[i] != b[i];
      ok &= differing == 1;
      const auto back = neighbors(s, b);
      ok &= std::find(back.begin(), back.end(), a) != back.end();
    }
    if (!ok) ++failures;
  }
  Verdict v;
  v.pass = failures == 0;
  v.detail = std::to_string(1000 - failures) + "/1000 pairs with (m-1)|S| distinct, symmetric neighbors";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 phase transition", phase_transition},
      {"2 oracle exactness", oracle_exactness},
      {"3 global hill-climbing soundness", hill_climb_soundness},
      {"4 individual hill-climbing counterexample", counterexample},
      {"5 theory formulas", theory_formulas},
      {"6 sweep determinism", determinism},
      {"7 neighborhood algebra", neighborhood_algebra},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << name << ": " << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
