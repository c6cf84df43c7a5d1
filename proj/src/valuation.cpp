#include "edgeworth/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "edgeworth/errors.hpp"

namespace edgeworth {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

// sum_{i=1}^{n-1} q_i d cont(n-i) + tail(n) p, where cont(m) is the value of
// the m-seller market one period later.
template <typename Continuation>
double positive_demand_payoff(int n, const MarketParams& params, Continuation cont) {
  const auto& demand = params.demand;
  double sum = demand.tail(u(n)) * params.reserve_price;
  for (int i = 1; i < n; ++i)
    sum += demand.prob(u(i)) * params.discount * cont(n - i);
  return sum;
}

}  // namespace

void MarketParams::validate() const {
  if (n_sellers < 1)
    throw InvalidParameter(fmt::format("n_sellers must be >= 1, got {}", n_sellers));
  if (horizon < 0)
    throw InvalidParameter(fmt::format("horizon must be >= 0, got {}", horizon));
  if (!(reserve_price > 0.0) || !std::isfinite(reserve_price))
    throw InvalidParameter(fmt::format("reserve_price must be positive, got {}", reserve_price));
  if (!(discount > 0.0 && discount <= 1.0))
    throw InvalidParameter(fmt::format("discount must lie in (0,1], got {}", discount));
}

ValueTable::ValueTable(MarketParams params) : params_(std::move(params)) {
  params_.validate();
  const int n_max = params_.n_sellers;
  const int t_max = params_.horizon;
  const std::size_t stride = u(t_max + 1);
  values_.assign(u(n_max) * stride, 0.0);
  const auto& demand = params_.demand;
  for (int t = 1; t <= t_max; ++t) {
    for (int n = 1; n <= n_max; ++n) {
      double v = demand.prob(0) * params_.discount * values_[u(n - 1) * stride + u(t - 1)];
      v += positive_demand_payoff(n, params_, [&](int m) {
        return values_[u(m - 1) * stride + u(t - 1)];
      });
      values_[u(n - 1) * stride + u(t)] = v;
    }
  }
}

void ValueTable::check_index(int n, int t) const {
  if (n < 1 || n > params_.n_sellers || t < 0 || t > params_.horizon)
    throw InvalidParameter(fmt::format("(n={}, t={}) outside table [1,{}]x[0,{}]", n, t,
                                       params_.n_sellers, params_.horizon));
}

double ValueTable::value(int n, int t) const {
  check_index(n, t);
  return values_[u(n - 1) * u(params_.horizon + 1) + u(t)];
}

double ValueTable::reservation_price(int n, int t) const {
  check_index(n, t);
  if (n < 2 || t < 1)
    throw InvalidParameter(fmt::format("reservation price needs n >= 2 and t >= 1, got (n={}, t={})", n, t));
  const double q0 = params_.demand.prob(0);
  if (q0 >= 1.0) throw DegenerateDemand("q_0 = 1: demand never arrives, reservation price undefined");
  if (params_.demand.is_binary()) return params_.discount * value(n - 1, t - 1);
  return positive_demand_payoff(n, params_, [&](int m) { return value(m, t - 1); }) / (1.0 - q0);
}

std::optional<double> ValueTable::reservation_price_if_defined(int n, int t) const {
  check_index(n, t);
  if (n < 2 || t < 1 || params_.demand.prob(0) >= 1.0) return std::nullopt;
  return reservation_price(n, t);
}

double monopolist_value(int t, const MarketParams& params) {
  params.validate();
  if (t < 0) throw InvalidParameter(fmt::format("horizon must be >= 0, got {}", t));
  const double q0 = params.demand.prob(0);
  const double r = q0 * params.discount;
  if (r >= 1.0) return 0.0;
  return (1.0 - q0) * params.reserve_price * (1.0 - std::pow(r, t)) / (1.0 - r);
}

double option_value(int n, int t, const MarketParams& params) {
  if (n < 1 || t < 0) throw InvalidParameter(fmt::format("option value needs n >= 1, t >= 0, got (n={}, t={})", n, t));
  MarketParams p = params;
  p.n_sellers = n;
  p.horizon = t;
  return ValueTable(std::move(p)).value(n, t);
}

double reservation_price(int n, int t, const MarketParams& params) {
  if (n < 2 || t < 1)
    throw InvalidParameter(fmt::format("reservation price needs n >= 2 and t >= 1, got (n={}, t={})", n, t));
  MarketParams p = params;
  p.n_sellers = n;
  p.horizon = t;
  return ValueTable(std::move(p)).reservation_price(n, t);
}

InfiniteHorizon infinite_horizon(int n_max, const MarketParams& params) {
  params.validate();
  if (n_max < 1) throw InvalidParameter(fmt::format("n_max must be >= 1, got {}", n_max));
  if (params.discount >= 1.0) throw NoFixedPoint("discount = 1: the infinite-horizon recursion has no fixed point");

  const double delta = params.discount;
  const double pbar = params.reserve_price;
  const auto& demand = params.demand;
  const double q0 = demand.prob(0);

  InfiniteHorizon out;
  out.values.assign(u(n_max), 0.0);
  out.reservation_prices.assign(u(n_max), std::numeric_limits<double>::quiet_NaN());

  if (demand.is_binary()) {
    out.values[0] = (1.0 - q0) * pbar / (1.0 - q0 * delta);
    for (int n = 2; n <= n_max; ++n)
      out.values[u(n - 1)] = (1.0 - q0) * delta * out.values[u(n - 2)] / (1.0 - q0 * delta);
  } else {
    // Jacobi sweeps contract at rate delta in the sup norm, so stopping once
    // the step is below tol (1 - delta) / delta bounds the error by tol.
    const double tol = 1e-12;
    const double step_tol =
        std::max(tol * (1.0 - delta) / delta, 8.0 * std::numeric_limits<double>::epsilon() * pbar);
    std::vector<double> next(out.values.size());
    for (int it = 1;; ++it) {
      double step = 0.0;
      for (int n = 1; n <= n_max; ++n) {
        const double v = q0 * delta * out.values[u(n - 1)] +
                         positive_demand_payoff(n, params, [&](int m) { return out.values[u(m - 1)]; });
        step = std::max(step, std::abs(v - out.values[u(n - 1)]));
        next[u(n - 1)] = v;
      }
      out.values.swap(next);
      out.iterations = it;
      if (step <= step_tol) break;
      if (it > 50'000'000) throw InternalConsistency("value iteration failed to converge");
    }
  }

  if (q0 < 1.0) {
    for (int n = 2; n <= n_max; ++n) {
      out.reservation_prices[u(n - 1)] =
          demand.is_binary()
              ? delta * out.values[u(n - 2)]
              : positive_demand_payoff(n, params, [&](int m) { return out.values[u(m - 1)]; }) / (1.0 - q0);
    }
  }
  return out;
}

double infinite_horizon_value(int n, const MarketParams& params) {
  return infinite_horizon(n, params).value(n);
}

}  // namespace edgeworth
