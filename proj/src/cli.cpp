#include "svcalloc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "svcalloc/experiment.hpp"
#include "svcalloc/oracle.hpp"
#include "svcalloc/scenario_io.hpp"
#include "svcalloc/theory.hpp"

namespace svcalloc::cli {

namespace {

const std::map<std::string, Algorithm> kAlgorithms = {
    {"bidding", Algorithm::kBidding},
    {"global-hc", Algorithm::kGlobalHillClimb},
    {"individual-hc", Algorithm::kIndividualHillClimb},
};

const std::map<std::string, BidMode> kBidModes = {
    {"fixed", BidMode::kFixed},
    {"marginal", BidMode::kMarginal},
};

template <typename E>
std::string name_of(const std::map<std::string, E>& table, E value) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return {};
}

std::string format_plain(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

void add_simulate_options(CLI::App& cmd, SimulateOptions& o) {
  cmd.add_option("--scenario", o.scenario_path, "Scenario JSON file")->required();
  cmd.add_option("--k", o.k, "Sensors each target bids to")->required()->check(CLI::PositiveNumber);
  cmd.add_option("--seed", o.seed, "Run seed")->required();
  cmd.add_option("--algorithm", o.algorithm, "bidding | global-hc | individual-hc")
      ->transform(CLI::CheckedTransformer(kAlgorithms, CLI::ignore_case));
  cmd.add_option("--bid-mode", o.bid_mode, "fixed | marginal")
      ->transform(CLI::CheckedTransformer(kBidModes, CLI::ignore_case));
  cmd.add_option("--bid-amount", o.bid_amount, "Amount of a fixed bid")->check(CLI::NonNegativeNumber);
  cmd.add_option("--miss-prob", o.miss_probability, "Probability a bid is dropped")
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--max-rounds", o.max_rounds, "Round cap")->check(CLI::PositiveNumber);
  cmd.add_option("--quiescence", o.quiescence_rounds, "Unchanged rounds before stopping")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--out", o.out_dir, "Directory for trace.csv");
}

std::vector<std::string> reversed(std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  return args;
}

RoundConfig round_config_of(const SimulateOptions& o) {
  RoundConfig rc;
  rc.max_rounds = o.max_rounds;
  rc.quiescence_rounds = o.quiescence_rounds;
  rc.miss_probability = o.miss_probability;
  return rc;
}

std::optional<Utility> try_optimum(const Scenario& scenario) {
  const auto size = allocation_space_size(scenario);
  if (!size || *size > kDefaultEnumerationBudget) return std::nullopt;
  return enumerate_optimum(scenario).optimum_gu;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  const Scenario scenario = load_scenario(o.scenario_path);
  const Allocation start = default_start(scenario);
  const std::optional<Utility> optimum = try_optimum(scenario);

  RunTrace trace;
  switch (o.algorithm) {
    case Algorithm::kBidding: {
      BidPolicy policy{o.bid_mode, o.bid_amount, o.k};
      trace = run_protocol(scenario, start, policy, round_config_of(o), o.seed, optimum);
      break;
    }
    case Algorithm::kGlobalHillClimb:
      trace = run_global_hill_climb(scenario, start, o.seed, optimum);
      break;
    case Algorithm::kIndividualHillClimb:
      trace = run_individual_hill_climb(scenario, start, round_config_of(o), o.seed, optimum);
      break;
  }

  std::filesystem::create_directories(o.out_dir);
  const auto csv_path = std::filesystem::path(o.out_dir) / "trace.csv";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    write_trace_header(csv);
    write_trace_rows(csv, trace, 0, 0, static_cast<int>(o.k));
  }

  const RoundRecord& last = trace.final_record();
  out << "algorithm: " << name_of(kAlgorithms, o.algorithm) << '\n';
  if (o.algorithm == Algorithm::kBidding) {
    out << "bid mode: " << name_of(kBidModes, o.bid_mode) << ", k = " << o.k
        << ", miss probability = " << format_plain(o.miss_probability) << '\n';
  }
  out << "sensors: " << scenario.num_sensors() << ", targets: " << scenario.num_targets() << '\n';
  out << (o.algorithm == Algorithm::kGlobalHillClimb ? "steps: " : "rounds: ")
      << trace.rounds_executed << (trace.converged ? " (converged)" : " (round cap reached)") << '\n';
  out << "start GU: " << trace.rounds.front().gu << '\n';
  out << "final GU: " << last.gu << '\n';
  if (!last.allocation.states.empty() || scenario.num_sensors() == 0) {
    out << "final allocation: " << last.allocation.to_string() << '\n';
  }
  if (optimum) {
    out << "optimum GU: " << *optimum << '\n';
    out << "alpha: " << (last.alpha ? format_double(*last.alpha) : std::string("undefined")) << '\n';
  } else {
    out << "optimum GU: not computed (allocation space exceeds the enumeration budget)\n";
  }
  out << "trace: " << csv_path.string() << '\n';
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::optional<std::uint64_t>& seed,
              const std::optional<int>& placements, const std::optional<int>& runs,
              unsigned threads, const std::string& out_dir, std::ostream& out) {
  ExperimentConfig config = load_experiment_config(config_path);
  if (seed) config.master_seed = *seed;
  if (placements) config.placements = *placements;
  if (runs) config.runs_per_placement = *runs;
  config.validate();

  const SweepResult result = run_sweep(config, threads);
  write_sweep_outputs(result, out_dir);

  out << "k  mean_alpha  frac_optimal  median  mean_rounds  excluded\n";
  for (const auto& row : summarize(result)) {
    char line[160];
    std::snprintf(line, sizeof line, "%-2d %10.4f %13.4f %7.4f %12.2f %9zu\n", row.k, row.mean_alpha,
                  row.frac_optimal, row.median, row.mean_rounds, row.excluded);
    out << line;
  }
  out << "outputs written to " << out_dir << '\n';
  return kExitOk;
}

int cmd_oracle(const std::string& scenario_path, std::uint64_t budget, std::ostream& out) {
  const Scenario scenario = load_scenario(scenario_path);
  const OptimumResult r = enumerate_optimum(scenario, budget);
  out << r.visited << " allocations enumerated\n";
  out << "optimum GU: " << r.optimum_gu << '\n';
  out << "maximizers (" << r.optimum_allocations.size() << "):\n";
  for (const auto& a : r.optimum_allocations) out << "  " << a.to_string() << '\n';
  return kExitOk;
}

int cmd_census(const std::string& scenario_path, std::uint64_t budget, std::ostream& out) {
  const Scenario scenario = load_scenario(scenario_path);
  const LandscapeCensus c = census(scenario, budget);
  out << census_to_json(c).dump(2) << '\n';
  return kExitOk;
}

int cmd_theory(std::optional<std::int64_t> sensors, std::optional<std::int64_t> states,
               const std::string& scenario_path, std::uint64_t budget, std::ostream& out) {
  nlohmann::json doc;
  std::optional<Scenario> scenario;
  if (!scenario_path.empty()) {
    scenario = load_scenario(scenario_path);
    if (!sensors) sensors = static_cast<std::int64_t>(scenario->num_sensors());
    if (!states) states = scenario->num_states();
  }
  if (!sensors || !states) {
    throw CLI::ValidationError("theory needs --sensors and --states, or --scenario");
  }
  doc["theory"] = theory::report_to_json(theory::make_report(*sensors, *states));
  if (scenario) doc["census"] = census_to_json(census(*scenario, budget));
  out << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

std::vector<std::string> to_args(const SimulateOptions& o) {
  return {"--scenario",   o.scenario_path,
          "--k",          std::to_string(o.k),
          "--seed",       std::to_string(o.seed),
          "--algorithm",  name_of(kAlgorithms, o.algorithm),
          "--bid-mode",   name_of(kBidModes, o.bid_mode),
          "--bid-amount", std::to_string(o.bid_amount),
          "--miss-prob",  format_plain(o.miss_probability),
          "--max-rounds", std::to_string(o.max_rounds),
          "--quiescence", std::to_string(o.quiescence_rounds),
          "--out",        o.out_dir};
}

SimulateOptions parse_simulate_args(const std::vector<std::string>& args) {
  SimulateOptions o;
  CLI::App cmd{"simulate", "simulate"};
  add_simulate_options(cmd, o);
  try {
    auto rev = reversed(args);
    cmd.parse(rev);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  return o;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed service allocation: sensor/target simulations, sweeps and landscape analysis",
               "svcalloc"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run one trace of a coordination algorithm");
  add_simulate_options(*simulate, sim);

  std::string config_path;
  std::optional<std::uint64_t> sweep_seed;
  std::optional<int> sweep_placements;
  std::optional<int> sweep_runs;
  unsigned threads = 0;
  std::string sweep_out = "results";
  auto* sweep = app.add_subcommand("sweep", "Run the neighbor-count sweep from an experiment config");
  sweep->add_option("--config", config_path, "Experiment JSON file")->required();
  sweep->add_option("--seed", sweep_seed, "Override master_seed");
  sweep->add_option("--placements", sweep_placements, "Override placements")->check(CLI::PositiveNumber);
  sweep->add_option("--runs", sweep_runs, "Override runs_per_placement")->check(CLI::PositiveNumber);
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");
  sweep->add_option("--out", sweep_out, "Output directory");

  std::string scenario_path;
  std::uint64_t budget = kDefaultEnumerationBudget;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum and maximizers");
  oracle->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  oracle->add_option("--budget", budget, "Enumeration budget")->check(CLI::PositiveNumber);

  auto* census_cmd = app.add_subcommand("census", "Local-optima census of a scenario");
  census_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  census_cmd->add_option("--budget", budget, "Enumeration budget")->check(CLI::PositiveNumber);

  std::optional<std::int64_t> sensors;
  std::optional<std::int64_t> states;
  auto* theory_cmd = app.add_subcommand("theory", "Closed-form landscape predictions");
  theory_cmd->add_option("--sensors", sensors, "Number of sensors")->check(CLI::NonNegativeNumber);
  theory_cmd->add_option("--states", states, "States per sensor")->check(CLI::PositiveNumber);
  theory_cmd->add_option("--scenario", scenario_path, "Also run the oracle census on this scenario");
  theory_cmd->add_option("--budget", budget, "Enumeration budget")->check(CLI::PositiveNumber);

  try {
    auto rev = reversed(args);
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out);
    if (*sweep) {
      return cmd_sweep(config_path, sweep_seed, sweep_placements, sweep_runs, threads, sweep_out, out);
    }
    if (*oracle) return cmd_oracle(scenario_path, budget, out);
    if (*census_cmd) return cmd_census(scenario_path, budget, out);
    if (*theory_cmd) return cmd_theory(sensors, states, scenario_path, budget, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace svcalloc::cli
