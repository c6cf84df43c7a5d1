#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "edgeworth/strategy.hpp"
#include "edgeworth/valuation.hpp"

namespace edgeworth {

enum class Variant { Monopoly, DuopolyBinary, OligopolyBinary, DuopolyGeneral, OligopolyGeneral };

/// Binary variants for Bernoulli demand, general variants otherwise.
Variant infer_variant(int n, const DemandModel& demand);
std::string_view variant_name(Variant v);

/// Both sellers post the pure price P*_{2,t}; at t = 1 this is the Bertrand
/// price 0. Bernoulli demand only.
StrategyProfile duopoly_binary_equilibrium(int t, const ValueTable& table);

/// Sellers 1 and 2 post P*_{n,t}, every other seller posts the reserve
/// price. Marked as a candidate: the deviation oracle must certify it.
/// When t < n, P*_{n,t} = 0 and every seller's value is 0.
StrategyProfile oligopoly_binary_candidate(int n, int t, const ValueTable& table);

/// Atomless duopoly CDF on [P*_{2,t}, p] that leaves the rival indifferent
/// across the support. Needs q_1 > 0 and P(demand >= 2) > 0.
MixedStrategyCdf duopoly_general_cdf(int t, const ValueTable& table);

/// Probability that at most k of n - 1 independent rivals price below a
/// threshold each undercuts with probability x.
double z_function(int k, int n, double x);

/// The price at which the symmetric n-seller CDF reaches x. Its inverse is
/// the equilibrium CDF; G(0) = P*_{n,t} and G(1) = p.
class OligopolyG {
 public:
  OligopolyG(int n, int t, const ValueTable& table);
  /// next_values[m-1] is the value of an m-seller market one period later;
  /// used with infinite-horizon values for the stationary comparator.
  OligopolyG(int n, const MarketParams& params, std::span<const double> next_values);

  double operator()(double x) const;
  int sellers() const { return n_; }

 private:
  int n_;
  double reserve_price_;
  double tail_;                       // P(demand >= n)
  std::vector<double> weights_;       // q_i, i = 1..n-1
  std::vector<double> continuation_;  // d V(n-i, t-1), i = 1..n-1
  std::vector<double> binomial_;      // C(n-1, j), j = 0..n-1
};

double oligopoly_G(double x, int n, int t, const ValueTable& table);

/// Symmetric equilibrium CDF for n >= 2 sellers under general demand,
/// evaluated by bisection on G. inv_tol defaults to 1e-10 * p.
MixedStrategyCdf oligopoly_general_cdf(int n, int t, const ValueTable& table,
                                       std::optional<double> inv_tol = std::nullopt);

/// The shipped equilibrium (or candidate) for the (n, t) subgame. A lone
/// seller posts the reserve price.
StrategyProfile equilibrium_profile(int n, int t, const ValueTable& table);

/// Strategy profiles for every market state (sellers remaining, periods left).
class EquilibriumPlan {
 public:
  EquilibriumPlan(int max_sellers, int horizon);

  /// equilibrium_profile() for every 1 <= n <= N, 1 <= t <= T.
  static EquilibriumPlan build(const ValueTable& table);

  void set(int n, int t, StrategyProfile profile);
  bool contains(int n, int t) const;
  /// Throws InvalidParameter when the state has no profile.
  const StrategyProfile& at(int n, int t) const;

  int max_sellers() const { return max_sellers_; }
  int horizon() const { return horizon_; }
  /// Throws InvalidParameter unless every state is present with n strategies.
  void validate() const;

 private:
  int max_sellers_;
  int horizon_;
  std::map<std::pair<int, int>, StrategyProfile> profiles_;
};

}  // namespace edgeworth
