#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "svcalloc/bidding.hpp"

namespace svcalloc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

inline constexpr const char* kVersion = "svcalloc 0.1.0";

enum class Algorithm { kBidding, kGlobalHillClimb, kIndividualHillClimb };

/// Effective settings of one `simulate` invocation.
struct SimulateOptions {
  std::string scenario_path;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kBidding;
  BidMode bid_mode = BidMode::kFixed;
  Utility bid_amount = 1;
  double miss_probability = 0.0;
  int max_rounds = 50;
  int quiescence_rounds = 3;
  std::string out_dir = ".";

  friend bool operator==(const SimulateOptions&, const SimulateOptions&) = default;
};

/// The `simulate` argument list (subcommand name excluded) that reproduces `options`.
std::vector<std::string> to_args(const SimulateOptions& options);

/// Parses `simulate` arguments (subcommand name excluded). Throws ConfigError on bad input.
SimulateOptions parse_simulate_args(const std::vector<std::string>& args);

/// Entry point; args excludes the program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace svcalloc::cli
