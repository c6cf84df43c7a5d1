#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "edgeworth/equilibrium.hpp"
#include "edgeworth/errors.hpp"
#include "edgeworth/verification.hpp"
#include "oracles.hpp"

using namespace edgeworth;

namespace {

MarketParams make(DemandModel demand, int n, int t) {
  MarketParams p;
  p.n_sellers = n;
  p.horizon = t;
  p.demand = std::move(demand);
  return p;
}

// Pure rivals: average over every ordering of the sellers used to break ties.
double brute_force_pure(std::size_t seller, double price, const std::vector<double>& rivals_and_self, int t,
                        const ValueTable& table) {
  const auto& p = table.params();
  std::vector<double> prices = rivals_and_self;
  prices[seller] = price;
  const int n = static_cast<int>(prices.size());
  std::vector<int> order(prices.size());
  std::iota(order.begin(), order.end(), 0);
  double total = 0.0;
  int perms = 0;
  do {
    // rank[i] = position of seller i in the tie-break order
    std::vector<int> rank(prices.size());
    for (int k = 0; k < n; ++k) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
    int ahead = 0;
    for (int j = 0; j < n; ++j) {
      if (static_cast<std::size_t>(j) == seller) continue;
      const auto sj = static_cast<std::size_t>(j);
      if (prices[sj] < price || (prices[sj] == price && rank[sj] < rank[seller])) ++ahead;
    }
    double v = 0.0;
    for (std::size_t d = 0; d <= p.demand.max_demand(); ++d) {
      const double qd = p.demand.prob(d);
      if (static_cast<int>(d) > ahead)
        v += qd * price;
      else
        v += qd * p.discount * table.value(n - static_cast<int>(std::min<std::size_t>(d, static_cast<std::size_t>(n))), t - 1);
    }
    total += v;
    ++perms;
  } while (std::next_permutation(order.begin(), order.end()));
  return total / perms;
}

// Symmetric continuous rivals: the number undercutting is binomial in W(price).
double symmetric_mixed(double price, const MixedStrategyCdf& w, int n, int t, const ValueTable& table) {
  const auto& p = table.params();
  const double x = w.cdf(price);
  double v = p.demand.prob(0) * p.discount * table.value(n, t - 1);
  for (int d = 1; d < n; ++d) {
    const double z = oracle::z_by_subsets(d - 1, n, x);
    v += p.demand.prob(static_cast<std::size_t>(d)) * (z * price + (1 - z) * p.discount * table.value(n - d, t - 1));
  }
  return v + p.demand.tail(static_cast<std::size_t>(n)) * price;
}

}  // namespace

TEST_CASE("pure-profile payoffs agree with tie enumeration") {
  ValueTable table(make(DemandModel::poisson(0.8), 4, 4));
  const std::vector<std::vector<double>> profiles{
      {10.0, 20.0}, {15.0, 15.0, 30.0}, {12.0, 12.0, 12.0, 40.0}, {5.0, 25.0, 25.0, 25.0}};
  for (const auto& prices : profiles) {
    StrategyProfile prof;
    for (double x : prices) prof.strategies.push_back(MixedStrategyCdf::pure(x));
    for (std::size_t s = 0; s < prices.size(); ++s)
      for (double dev : {0.0, 5.0, 11.0, 12.0, 15.0, 25.0, 33.0, 40.0})
        for (int t = 1; t <= 4; ++t)
          CHECK(std::abs(deviation_payoff(s, dev, prof, t, table) - brute_force_pure(s, dev, prices, t, table)) < 1e-12);
  }
}

TEST_CASE("binary duopoly tie splits the sale") {
  ValueTable table(make(DemandModel::bernoulli(0.5), 2, 3));
  auto prof = duopoly_binary_equilibrium(3, table);
  // Tied at 26.1: half the time the sale, otherwise the rival leaves.
  const double expect = 0.5 * 0.9 * table.value(2, 2) + 0.5 * (0.5 * 26.1 + 0.5 * 0.9 * table.value(1, 2));
  CHECK(std::abs(deviation_payoff(0, 26.1, prof, 3, table) - expect) < 1e-12);
  CHECK(std::abs(deviation_payoff(0, 26.1, prof, 3, table) - table.value(2, 3)) < 1e-12);
}

TEST_CASE("mixed duopoly payoff is flat on the support") {
  ValueTable table(make(DemandModel::poisson(0.5), 2, 10));
  for (int t : {1, 2, 5, 10}) {
    auto w = duopoly_general_cdf(t, table);
    auto prof = StrategyProfile::symmetric_profile(w, 2);
    const double lo = w.support_lo();
    for (int k = 0; k <= 40; ++k) {
      const double p = lo + (40.0 - lo) * k / 40.0;
      const double v = deviation_payoff(0, p, prof, t, table);
      CHECK(std::abs(v - table.value(2, t)) < 1e-8 * 40.0);
      CHECK(std::abs(v - symmetric_mixed(p, w, 2, t, table)) < 1e-12);
    }
    for (double p : {0.0, lo * 0.5, lo * 0.99})
      CHECK(deviation_payoff(0, p, prof, t, table) <= table.value(2, t) + 1e-12);
  }
}

TEST_CASE("mixed oligopoly payoff matches the binomial form") {
  ValueTable table(make(DemandModel::poisson(0.5), 4, 5));
  for (int n : {3, 4}) {
    auto w = oligopoly_general_cdf(n, 5, table);
    auto prof = StrategyProfile::symmetric_profile(w, n);
    for (int k = 1; k < 20; ++k) {
      const double p = w.support_lo() + (40.0 - w.support_lo()) * k / 20.0;
      CHECK(std::abs(deviation_payoff(1, p, prof, 5, table) - symmetric_mixed(p, w, n, 5, table)) < 1e-12);
    }
  }
}

TEST_CASE("certification accepts equilibria and rejects everyone at the reserve") {
  ValueTable b(make(DemandModel::bernoulli(0.5), 3, 3));
  ValueTable g(make(DemandModel::poisson(0.5), 3, 3));
  const double eps = 1e-8 * 40.0;
  CHECK(check_epsilon_equilibrium(equilibrium_profile(2, 3, b), 3, b, 200, eps).certified);
  CHECK(check_epsilon_equilibrium(equilibrium_profile(3, 3, b), 3, b, 200, eps).certified);
  CHECK(check_epsilon_equilibrium(equilibrium_profile(2, 3, g), 3, g, 200, eps).certified);
  CHECK(check_epsilon_equilibrium(equilibrium_profile(3, 3, g), 3, g, 200, eps).certified);

  for (int n : {2, 3}) {
    auto reserve = StrategyProfile::symmetric_profile(MixedStrategyCdf::pure(40.0), n);
    auto check = check_epsilon_equilibrium(reserve, 3, g, 200, eps);
    CHECK_FALSE(check.certified);
    CHECK(check.reports.size() == static_cast<std::size_t>(n));
    CHECK(check.reports[0].best_deviation_gain > eps);
  }
}

TEST_CASE("certification reports each seller") {
  ValueTable g(make(DemandModel::poisson(0.5), 3, 3));
  auto check = check_epsilon_equilibrium(equilibrium_profile(3, 2, g), 2, g, 150, 1e-6);
  REQUIRE(check.reports.size() == 3);
  for (const auto& r : check.reports) {
    CHECK(r.grid.size() >= 150);
    CHECK(std::is_sorted(r.grid.begin(), r.grid.end()));
    CHECK(r.equilibrium_value == doctest::Approx(g.value(3, 2)));
    CHECK(r.max_gap_on_support < 1e-6);
  }
}

TEST_CASE("deviation grid contains the special prices") {
  ValueTable g(make(DemandModel::poisson(0.5), 2, 2));
  auto prof = equilibrium_profile(2, 2, g);
  auto grid = deviation_grid(prof, 40.0, 100);
  CHECK(grid.size() >= 100);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(std::adjacent_find(grid.begin(), grid.end()) == grid.end());
  CHECK(std::find(grid.begin(), grid.end(), prof[0].support_lo()) != grid.end());
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 40.0);
}

TEST_CASE("deviation argument validation") {
  ValueTable g(make(DemandModel::poisson(0.5), 2, 2));
  auto prof = equilibrium_profile(2, 2, g);
  CHECK_THROWS_AS(deviation_payoff(0, 41.0, prof, 2, g), InvalidParameter);
  CHECK_THROWS_AS(deviation_payoff(0, -1.0, prof, 2, g), InvalidParameter);
  CHECK_THROWS_AS(deviation_payoff(2, 10.0, prof, 2, g), InvalidParameter);
  CHECK_THROWS_AS(deviation_payoff(0, 10.0, prof, 3, g), InvalidParameter);
  CHECK_THROWS_AS(check_epsilon_equilibrium(prof, 2, g, 99, 1e-6), InvalidParameter);
  CHECK_THROWS_AS(check_epsilon_equilibrium(prof, 2, g, 200, -1.0), InvalidParameter);
}
