#include "svcalloc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "svcalloc/scenario_io.hpp"

namespace svcalloc {

using nlohmann::json;

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

const char* bid_mode_name(BidMode mode) { return mode == BidMode::kFixed ? "fixed" : "marginal"; }

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (num_sensors < 0) throw ContractViolation("num_sensors must be non-negative");
  if (num_targets < 0) throw ContractViolation("num_targets must be non-negative");
  if (!(field_width > 0.0) || !(field_height > 0.0)) {
    throw ContractViolation("field dimensions must be positive");
  }
  if (placements < 1) throw ContractViolation("placements must be at least 1");
  if (runs_per_placement < 1) throw ContractViolation("runs_per_placement must be at least 1");
  if (neighbor_counts.empty()) throw ContractViolation("neighbor_counts must not be empty");
  for (int k : neighbor_counts) {
    if (k < 1 || k > num_sensors) {
      throw ContractViolation("neighbor count " + std::to_string(k) + " outside [1, " +
                              std::to_string(num_sensors) + "]");
    }
  }
  if (fixed_bid_amount < 0) throw ContractViolation("bid amount must be non-negative");
  round_config.validate();
  geometry.validate();
  utility.validate();
}

ExperimentConfig experiment_config_from_json(const json& j, const std::string& source) {
  namespace js = json_schema;
  js::require_object(j,
                     {"num_sensors", "num_targets", "field_width", "field_height", "placements",
                      "runs_per_placement", "neighbor_counts", "master_seed", "bid_policy",
                      "round_config", "geometry", "utility", "off_allowed", "oracle_budget"},
                     source);
  ExperimentConfig c;
  auto int_field = [&](const char* key, int& dst) {
    if (!j.contains(key)) return;
    const auto v = js::get_integer(j, key, source);
    if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(source + "." + key + ": out of range");
    dst = static_cast<int>(v);
  };
  int_field("num_sensors", c.num_sensors);
  int_field("num_targets", c.num_targets);
  int_field("placements", c.placements);
  int_field("runs_per_placement", c.runs_per_placement);
  if (j.contains("field_width")) c.field_width = js::get_number(j, "field_width", source);
  if (j.contains("field_height")) c.field_height = js::get_number(j, "field_height", source);
  if (j.contains("neighbor_counts")) {
    const json& arr = j.at("neighbor_counts");
    if (!arr.is_array()) throw ConfigError(source + ".neighbor_counts: expected an array");
    c.neighbor_counts.clear();
    for (const auto& v : arr) {
      if (!v.is_number_integer()) throw ConfigError(source + ".neighbor_counts: expected integers");
      c.neighbor_counts.push_back(v.get<int>());
    }
  }
  if (j.contains("master_seed")) {
    const json& v = j.at("master_seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(source + ".master_seed: expected a non-negative integer");
    }
    c.master_seed = v.get<std::uint64_t>();
  }
  if (j.contains("bid_policy")) {
    const std::string where = source + ".bid_policy";
    const json& bp = j.at("bid_policy");
    js::require_object(bp, {"mode", "amount"}, where);
    if (bp.contains("mode")) {
      if (!bp.at("mode").is_string()) throw ConfigError(where + ".mode: expected a string");
      const auto mode = bp.at("mode").get<std::string>();
      if (mode == "fixed") {
        c.bid_mode = BidMode::kFixed;
      } else if (mode == "marginal") {
        c.bid_mode = BidMode::kMarginal;
      } else {
        throw ConfigError(where + ".mode: expected \"fixed\" or \"marginal\"");
      }
    }
    if (bp.contains("amount")) c.fixed_bid_amount = js::get_integer(bp, "amount", where);
  }
  if (j.contains("round_config")) {
    const std::string where = source + ".round_config";
    const json& rc = j.at("round_config");
    js::require_object(rc, {"max_rounds", "quiescence_rounds", "miss_probability"}, where);
    if (rc.contains("max_rounds")) c.round_config.max_rounds = static_cast<int>(js::get_integer(rc, "max_rounds", where));
    if (rc.contains("quiescence_rounds")) {
      c.round_config.quiescence_rounds = static_cast<int>(js::get_integer(rc, "quiescence_rounds", where));
    }
    if (rc.contains("miss_probability")) {
      c.round_config.miss_probability = js::get_number(rc, "miss_probability", where);
    }
  }
  if (j.contains("geometry")) c.geometry = geometry_from_json(j.at("geometry"), source + ".geometry");
  if (j.contains("utility")) c.utility = utility_from_json(j.at("utility"), source + ".utility");
  if (j.contains("off_allowed")) c.off_allowed = js::get_bool(j, "off_allowed", source);
  if (j.contains("oracle_budget")) {
    const auto b = js::get_integer(j, "oracle_budget", source);
    if (b < 1) throw ConfigError(source + ".oracle_budget: must be positive");
    c.oracle_budget = static_cast<std::uint64_t>(b);
  }
  try {
    c.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

json experiment_config_to_json(const ExperimentConfig& c) {
  return {{"num_sensors", c.num_sensors},
          {"num_targets", c.num_targets},
          {"field_width", c.field_width},
          {"field_height", c.field_height},
          {"placements", c.placements},
          {"runs_per_placement", c.runs_per_placement},
          {"neighbor_counts", c.neighbor_counts},
          {"master_seed", c.master_seed},
          {"bid_policy", {{"mode", bid_mode_name(c.bid_mode)}, {"amount", c.fixed_bid_amount}}},
          {"round_config",
           {{"max_rounds", c.round_config.max_rounds},
            {"quiescence_rounds", c.round_config.quiescence_rounds},
            {"miss_probability", c.round_config.miss_probability}}},
          {"geometry", geometry_to_json(c.geometry)},
          {"utility", utility_to_json(c.utility)},
          {"off_allowed", c.off_allowed},
          {"oracle_budget", c.oracle_budget}};
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return experiment_config_from_json(read_json_file(path), path.string());
}

Seed placement_seed(const ExperimentConfig& config, int placement_index) {
  return derive_seed(config.master_seed, SeedRole::kPlacement,
                     {static_cast<std::uint64_t>(placement_index)});
}

Seed run_seed(const ExperimentConfig& config, int k, int placement_index, int run_index) {
  return derive_seed(config.master_seed, SeedRole::kProtocolRun,
                     {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(placement_index),
                      static_cast<std::uint64_t>(run_index)});
}

Scenario random_scenario(const ExperimentConfig& config, int placement_index) {
  if (placement_index < 0 || placement_index >= config.placements) {
    throw ContractViolation("placement index " + std::to_string(placement_index) + " out of range");
  }
  Rng rng(placement_seed(config, placement_index));
  Scenario s;
  s.geometry = config.geometry;
  s.utility = config.utility;
  s.off_allowed = config.off_allowed;
  auto draw = [&](int n, std::vector<Point2D>& out) {
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double x = rng.uniform(0.0, config.field_width);
      const double y = rng.uniform(0.0, config.field_height);
      out.push_back({x, y});
    }
  };
  draw(config.num_sensors, s.sensors);
  draw(config.num_targets, s.targets);
  return s;
}

std::int64_t alpha_bin(Utility gu, Utility optimum_gu) {
  if (optimum_gu <= 0) throw ContractViolation("alpha bin needs a positive optimum");
  return floor_div(20 * gu, optimum_gu);
}

double SweepResult::fraction_optimal(int k) const {
  const KStats& s = stats(k);
  const std::size_t defined = s.cells - s.excluded;
  return defined == 0 ? 0.0 : static_cast<double>(s.optimal) / static_cast<double>(defined);
}

const KStats& SweepResult::stats(int k) const {
  for (const auto& s : per_k) {
    if (s.k == k) return s;
  }
  throw ContractViolation("neighbor count " + std::to_string(k) + " not part of the sweep");
}

SweepResult run_sweep(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  // Fail fast on the budget before generating anything.
  if (auto size = allocation_space_size(random_scenario(config, 0)); !size || *size > config.oracle_budget) {
    throw BudgetExceeded("sweep scenarios exceed the enumeration budget of " +
                         std::to_string(config.oracle_budget));
  }
  std::vector<Scenario> scenarios(static_cast<std::size_t>(config.placements));
  parallel_for(scenarios.size(), threads, [&](std::size_t p) {
    scenarios[p] = random_scenario(config, static_cast<int>(p));
  });
  return run_sweep(config, std::move(scenarios), threads);
}

SweepResult run_sweep(const ExperimentConfig& config, std::vector<Scenario> scenarios,
                      unsigned threads) {
  config.validate();
  if (scenarios.size() != static_cast<std::size_t>(config.placements)) {
    throw ContractViolation("expected " + std::to_string(config.placements) + " scenarios, got " +
                            std::to_string(scenarios.size()));
  }
  SweepResult result;
  result.config = config;

  const auto placements = static_cast<std::size_t>(config.placements);
  const auto runs = static_cast<std::size_t>(config.runs_per_placement);
  const std::size_t ks = config.neighbor_counts.size();

  for (const auto& s : scenarios) {
    if (auto size = allocation_space_size(s); !size || *size > config.oracle_budget) {
      throw BudgetExceeded("sweep scenarios exceed the enumeration budget of " +
                           std::to_string(config.oracle_budget));
    }
    for (int k : config.neighbor_counts) {
      if (static_cast<std::size_t>(k) > s.num_sensors()) {
        throw ContractViolation("neighbor count " + std::to_string(k) + " exceeds the sensor count");
      }
    }
  }
  result.optimum_gu.assign(placements, 0);
  parallel_for(placements, threads, [&](std::size_t p) {
    result.optimum_gu[p] = enumerate_optimum(scenarios[p], config.oracle_budget).optimum_gu;
  });

  result.cells.resize(ks * placements * runs);
  parallel_for(result.cells.size(), threads, [&](std::size_t i) {
    const std::size_t ki = i / (placements * runs);
    const std::size_t p = (i / runs) % placements;
    const std::size_t r = i % runs;
    const int k = config.neighbor_counts[ki];
    const Scenario& scenario = scenarios[p];
    const Utility optimum = result.optimum_gu[p];

    BidPolicy policy{config.bid_mode, config.fixed_bid_amount, static_cast<std::size_t>(k)};
    SweepCell cell;
    cell.k = k;
    cell.placement = static_cast<int>(p);
    cell.run = static_cast<int>(r);
    cell.optimum_gu = optimum;
    cell.trace = run_protocol(scenario, default_start(scenario), policy, config.round_config,
                              run_seed(config, k, cell.placement, cell.run), optimum);
    cell.final_gu = cell.trace.final_record().gu;
    cell.final_alpha = alpha_ratio(cell.final_gu, optimum);
    cell.rounds = cell.trace.rounds_executed;
    cell.converged = cell.trace.converged;
    result.cells[i] = std::move(cell);
  });

  for (std::size_t ki = 0; ki < ks; ++ki) {
    KStats stats;
    stats.k = config.neighbor_counts[ki];
    for (std::size_t i = ki * placements * runs; i < (ki + 1) * placements * runs; ++i) {
      const SweepCell& cell = result.cells[i];
      ++stats.cells;
      if (!cell.final_alpha) {
        ++stats.excluded;
        continue;
      }
      if (cell.final_gu == cell.optimum_gu) ++stats.optimal;
      ++stats.histogram[alpha_bin(cell.final_gu, cell.optimum_gu)];
    }
    result.per_k.push_back(std::move(stats));
  }
  return result;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

std::vector<SummaryRow> summarize(const SweepResult& result) {
  if (result.cells.empty()) throw ContractViolation("cannot summarize an empty sweep");
  std::vector<SummaryRow> rows;
  for (const auto& stats : result.per_k) {
    SummaryRow row;
    row.k = stats.k;
    row.cells = stats.cells;
    row.excluded = stats.excluded;
    std::vector<double> alphas;
    double rounds_total = 0.0;
    for (const auto& cell : result.cells) {
      if (cell.k != stats.k) continue;
      rounds_total += cell.rounds;
      if (cell.final_alpha) alphas.push_back(*cell.final_alpha);
    }
    row.mean_rounds = stats.cells ? rounds_total / static_cast<double>(stats.cells) : 0.0;
    std::sort(alphas.begin(), alphas.end());
    if (alphas.empty()) {
      row.mean_alpha = row.frac_optimal = row.q1 = row.median = row.q3 = std::nan("");
    } else {
      row.mean_alpha = std::accumulate(alphas.begin(), alphas.end(), 0.0) /
                       static_cast<double>(alphas.size());
      row.frac_optimal = static_cast<double>(stats.optimal) / static_cast<double>(alphas.size());
      row.q1 = quantile_sorted(alphas, 0.25);
      row.median = quantile_sorted(alphas, 0.5);
      row.q3 = quantile_sorted(alphas, 0.75);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

void write_trace_header(std::ostream& out) { out << "placement_id,run_id,k,round,gu,alpha\n"; }

void write_trace_rows(std::ostream& out, const RunTrace& trace, int placement_id, int run_id, int k) {
  for (const auto& rec : trace.rounds) {
    out << placement_id << ',' << run_id << ',' << k << ',' << rec.round << ',' << rec.gu << ','
        << (rec.alpha ? format_double(*rec.alpha) : std::string()) << '\n';
  }
}

void write_traces_csv(std::ostream& out, const SweepResult& result) {
  write_trace_header(out);
  for (const auto& cell : result.cells) write_trace_rows(out, cell.trace, cell.placement, cell.run, cell.k);
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "k,mean_alpha,frac_optimal,q1,median,q3,mean_rounds\n";
  for (const auto& r : rows) {
    out << r.k << ',' << format_double(r.mean_alpha) << ',' << format_double(r.frac_optimal) << ','
        << format_double(r.q1) << ',' << format_double(r.median) << ',' << format_double(r.q3)
        << ',' << format_double(r.mean_rounds) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const SweepResult& result) {
  out << "k,alpha_bin,count\n";
  // Common bin range across k so the rows form a regular grid.
  std::int64_t lo = 0;
  std::int64_t hi = 20;
  for (const auto& s : result.per_k) {
    if (!s.histogram.empty()) {
      lo = std::min(lo, s.histogram.begin()->first);
      hi = std::max(hi, s.histogram.rbegin()->first);
    }
  }
  for (const auto& s : result.per_k) {
    for (std::int64_t b = lo; b <= hi; ++b) {
      const auto it = s.histogram.find(b);
      const std::size_t count = it == s.histogram.end() ? 0 : it->second;
      char edge[32];
      std::snprintf(edge, sizeof edge, "%.2f", static_cast<double>(b) * 0.05);
      out << s.k << ',' << edge << ',' << count << '\n';
    }
  }
}

void write_placement_summary_csv(std::ostream& out, const SweepResult& result) {
  out << "k,placement_id,optimum_gu,mean_alpha,frac_optimal\n";
  const std::size_t runs = static_cast<std::size_t>(result.config.runs_per_placement);
  for (std::size_t start = 0; start < result.cells.size(); start += runs) {
    const SweepCell& first = result.cells[start];
    out << first.k << ',' << first.placement << ',' << first.optimum_gu << ',';
    if (!first.final_alpha) {
      out << ",\n";
      continue;
    }
    double sum = 0.0;
    std::size_t optimal = 0;
    for (std::size_t i = start; i < start + runs; ++i) {
      sum += *result.cells[i].final_alpha;
      if (result.cells[i].final_gu == result.cells[i].optimum_gu) ++optimal;
    }
    out << format_double(sum / static_cast<double>(runs)) << ','
        << format_double(static_cast<double>(optimal) / static_cast<double>(runs)) << '\n';
  }
}

void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  auto open = [&](const char* name) {
    std::ofstream out(directory / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (directory / name).string());
    return out;
  };
  {
    auto out = open("traces.csv");
    write_traces_csv(out, result);
  }
  {
    auto out = open("summary.csv");
    write_summary_csv(out, summarize(result));
  }
  {
    auto out = open("histogram.csv");
    write_histogram_csv(out, result);
  }
  {
    auto out = open("placement_summary.csv");
    write_placement_summary_csv(out, result);
  }
}

RunTrace run_individual_hill_climb(const Scenario& scenario, const Allocation& start,
                                   const RoundConfig& config, Seed rng_seed,
                                   std::optional<Utility> optimum_gu) {
  check_allocation(scenario, start);
  config.validate();
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
    Allocation next = current;
    for (std::size_t c = 0; c < scenario.num_targets(); ++c) {
      const Seed seed = derive_seed(rng_seed, SeedRole::kIndividualStep,
                                    {static_cast<std::uint64_t>(round), c});
      next = individual_hill_climb_step(scenario, next, c, seed);
    }
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

RunTrace run_global_hill_climb(const Scenario& scenario, const Allocation& start, Seed rng_seed,
                               std::optional<Utility> optimum_gu) {
  const SearchOutcome outcome = global_hill_climb(scenario, start, rng_seed);
  RunTrace trace;
  for (std::size_t i = 0; i < outcome.gu_trace.size(); ++i) {
    RoundRecord rec;
    rec.round = static_cast<int>(i);
    rec.gu = outcome.gu_trace[i];
    if (optimum_gu) rec.alpha = alpha_ratio(rec.gu, *optimum_gu);
    trace.rounds.push_back(std::move(rec));
  }
  trace.rounds.front().allocation = start;
  trace.rounds.back().allocation = outcome.final_allocation;
  trace.rounds_executed = static_cast<int>(outcome.steps);
  trace.converged = outcome.converged;
  return trace;
}

}  // namespace svcalloc
