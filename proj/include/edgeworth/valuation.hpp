#pragma once

#include <optional>
#include <vector>

#include "edgeworth/demand.hpp"

namespace edgeworth {

struct MarketParams {
  int n_sellers = 2;
  int horizon = 1;
  double reserve_price = 40.0;
  double discount = 0.9;
  DemandModel demand = DemandModel::bernoulli(0.5);

  /// Throws InvalidParameter when a field is outside its domain.
  void validate() const;
};

/// Option values V(n, t) for 1 <= n <= N and 0 <= t <= T, built bottom-up in
/// t. Immutable once built, so concurrent reads are safe.
class ValueTable {
 public:
  explicit ValueTable(MarketParams params);

  const MarketParams& params() const { return params_; }
  int max_sellers() const { return params_.n_sellers; }
  int horizon() const { return params_.horizon; }

  double value(int n, int t) const;

  /// Lowest price a seller accepts with n sellers and t periods left.
  /// Throws DegenerateDemand when q_0 == 1.
  double reservation_price(int n, int t) const;

  /// reservation_price() when defined (n >= 2, t >= 1, q_0 < 1).
  std::optional<double> reservation_price_if_defined(int n, int t) const;

 private:
  void check_index(int n, int t) const;

  MarketParams params_;
  std::vector<double> values_;  // row-major [n-1][t]
};

/// Closed-form monopolist value (1-q0) p (1-(q0 d)^t) / (1-q0 d).
double monopolist_value(int t, const MarketParams& params);

double option_value(int n, int t, const MarketParams& params);
double reservation_price(int n, int t, const MarketParams& params);

/// Fixed point of the value recursion with the horizon index dropped.
struct InfiniteHorizon {
  std::vector<double> values;              // values[n-1] = V_inf(n)
  std::vector<double> reservation_prices;  // [n-1] = P*_{n,inf}; NaN for n = 1
  int iterations = 0;                      // 0 when solved in closed form

  double value(int n) const { return values.at(static_cast<std::size_t>(n - 1)); }
  double reservation_price(int n) const {
    return reservation_prices.at(static_cast<std::size_t>(n - 1));
  }
};

/// Solves for every seller count up to n_max. Bernoulli demand is solved in
/// closed form, other demand by value iteration to 1e-12. Throws NoFixedPoint
/// when the discount is 1.
InfiniteHorizon infinite_horizon(int n_max, const MarketParams& params);

double infinite_horizon_value(int n, const MarketParams& params);

}  // namespace edgeworth
