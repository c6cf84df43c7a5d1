#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edgeworth/valuation.hpp"

namespace edgeworth::cli {

/// Malformed or inconsistent run configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Demand block as written by the user; kept verbatim so headers can echo it.
struct DemandSpec {
  std::string kind = "bernoulli";
  double q = 0.5;
  std::vector<double> probs;
  double mean = 0.5;
  double trunc_tol = kDefaultTruncationTolerance;

  DemandModel build() const;
};

enum class ProfileOverride { Equilibrium, AllAtReserve };

struct RunConfig {
  int n_sellers = 2;
  int horizon = 1;
  double reserve_price = 40.0;
  double discount = 0.9;
  DemandSpec demand;

  std::optional<std::size_t> grid;  // cdf points or deviation grid, per command
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  std::optional<double> eps;  // default 1e-8 * reserve_price
  int tmax = 1000;
  ProfileOverride profile = ProfileOverride::Equilibrium;
  int histogram_bins = 40;
  std::vector<double> sweep_q;

  MarketParams market() const;
  double eps_or_default() const { return eps.value_or(1e-8 * reserve_price); }
};

/// Applies one `key=value` assignment. Demand keys carry a "demand." prefix.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Parses the line-oriented format: `key = value` lines, `#` comments, and a
/// `[demand]` section whose keys are demand fields. Several `key=value`
/// tokens may share a line.
RunConfig parse_config(std::string_view text, RunConfig base = {});

/// Configuration loaded from disk. A CSV written by the tool is accepted too:
/// its "# edgeworth <command> ..." first line is the configuration.
struct LoadedConfig {
  RunConfig config;
  std::optional<std::string> command;  // set when replaying a CSV header
};

LoadedConfig load_config(const std::filesystem::path& path);

/// "edgeworth <command> key=value ..." carrying every setting the command
/// reads, with numbers in shortest round-trip form.
std::string header_line(std::string_view command, const RunConfig& config);

}  // namespace edgeworth::cli
