#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "edgeworth/equilibrium.hpp"
#include "edgeworth/strategy.hpp"
#include "edgeworth/valuation.hpp"

namespace edgeworth {

// ---------------------------------------------------------------------------
// Deviation oracle
// ---------------------------------------------------------------------------

/// Expected payoff to `seller` posting `price` for one period while every
/// rival follows `profile`, with continuation values read from `table`.
///
/// Demand d is served in ascending price order; a tie group shares the
/// remaining units uniformly at random. A seller who does not sell under
/// demand d >= 1 watches d rivals sell and continues in the (n-d)-seller
/// market, worth d V(n-d, t-1). The exact tie term conditions on the joint
/// count of rivals strictly below and exactly at `price`.
double deviation_payoff(std::size_t seller, double price, const StrategyProfile& profile, int t,
                        const ValueTable& table);

struct DeviationReport {
  std::size_t seller_index = 0;
  std::vector<std::pair<double, double>> grid;  // (price, payoff)
  double equilibrium_value = 0.0;               // V(n, t)
  double max_gap_on_support = 0.0;
  double best_deviation_gain = 0.0;
};

struct EquilibriumCheck {
  std::vector<DeviationReport> reports;
  double eps = 0.0;
  bool certified = false;
};

/// Uniform grid over [0, p] plus every atom and support endpoint in the
/// profile and the midpoints between consecutive special prices.
std::vector<double> deviation_grid(const StrategyProfile& profile, double reserve_price,
                                   std::size_t grid_size);

/// Certifies the profile when no seller gains more than eps by deviating and
/// every price in a seller's own support pays within eps of V(n, t).
EquilibriumCheck check_epsilon_equilibrium(const StrategyProfile& profile, int t, const ValueTable& table,
                                           std::size_t grid_size, double eps);

// ---------------------------------------------------------------------------
// Monte Carlo market simulation
// ---------------------------------------------------------------------------

/// Welford accumulator; merging keeps equal-valued samples at exactly zero
/// variance.
struct RunningStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  double population_variance() const { return count ? m2 / static_cast<double>(count) : 0.0; }
  double sample_variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
};

struct PeriodTrace {
  int periods_left = 0;
  int sellers = 0;
  std::size_t demand = 0;
  std::vector<double> posted;        // by remaining-seller position
  std::vector<int> seller_ids;       // original index of each position
  std::vector<int> buyers;           // original indices of sellers who sold
  std::vector<double> sale_prices;   // aligned with buyers
};

struct TrialTrace {
  std::vector<PeriodTrace> periods;
  std::vector<double> discounted_profit;  // by original seller index
};

/// One market run from (N, T) until the horizon ends or every seller sold.
TrialTrace simulate_trial(const EquilibriumPlan& plan, const MarketParams& params, std::uint64_t seed,
                          std::uint64_t trial);

struct PriceHistogram {
  int periods_left = 0;
  std::vector<std::uint64_t> posted;
  std::vector<std::uint64_t> transacted;
};

struct SimulationReport {
  std::vector<double> per_seller_mean_profit;
  std::vector<double> per_seller_ci_halfwidth;  // 95% normal approximation
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double histogram_lo = 0.0;
  double histogram_hi = 0.0;
  std::vector<PriceHistogram> histograms;  // periods T..1
  /// Transacted prices keyed by (periods left, sellers in the market).
  std::map<std::pair<int, int>, RunningStats> transactions;
};

inline constexpr int kDefaultHistogramBins = 40;

SimulationReport simulate_market(const EquilibriumPlan& plan, const MarketParams& params, std::uint64_t trials,
                                 std::uint64_t seed, int histogram_bins = kDefaultHistogramBins);

struct PeriodDispersion {
  int periods_left = 0;
  std::optional<double> std_dev;  // nullopt when nothing sold in that period
};

/// Pooled within-state standard deviation of transacted prices per period.
std::vector<PeriodDispersion> effective_price_dispersion(const SimulationReport& report);

}  // namespace edgeworth
