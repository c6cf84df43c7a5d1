#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "edgeworth/errors.hpp"
#include "edgeworth/verification.hpp"

namespace edgeworth {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

}  // namespace

double deviation_payoff(std::size_t seller, double price, const StrategyProfile& profile, int t,
                        const ValueTable& table) {
  const auto& params = table.params();
  const double pbar = params.reserve_price;
  if (!(price >= 0.0 && price <= pbar))
    throw InvalidParameter(fmt::format("deviation price {} outside [0, {}]", price, pbar));
  const int n = static_cast<int>(profile.size());
  if (seller >= profile.size())
    throw InvalidParameter(fmt::format("seller {} outside profile of size {}", seller, n));
  if (n > table.max_sellers() || t < 1 || t > table.horizon())
    throw InvalidParameter(fmt::format("state (n={}, t={}) outside value table", n, t));

  // joint[l][e]: probability that l rivals price strictly below and e rivals
  // price exactly at `price`.
  std::vector<std::vector<double>> joint(u(n), std::vector<double>(u(n), 0.0));
  joint[0][0] = 1.0;
  int seen = 0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j == seller) continue;
    const double below = profile[j].cdf_left(price);
    const double at = profile[j].cdf(price) - below;
    const double above = 1.0 - below - at;
    for (int l = seen; l >= 0; --l) {
      for (int e = seen - l; e >= 0; --e) {
        const double w = joint[u(l)][u(e)];
        if (w == 0.0) continue;
        joint[u(l)][u(e)] = w * above;
        joint[u(l + 1)][u(e)] += w * below;
        joint[u(l)][u(e + 1)] += w * at;
      }
    }
    ++seen;
  }

  const auto& demand = params.demand;
  const double delta = params.discount;
  double payoff = demand.prob(0) * delta * table.value(n, t - 1);
  for (int d = 1; d < n; ++d) {
    const double qd = demand.prob(u(d));
    if (qd == 0.0) continue;
    double sell = 0.0;
    for (int l = 0; l < d; ++l)
      for (int e = 0; l + e <= n - 1; ++e)
        sell += joint[u(l)][u(e)] * std::min(1.0, static_cast<double>(d - l) / (e + 1));
    payoff += qd * (sell * price + (1.0 - sell) * delta * table.value(n - d, t - 1));
  }
  // Demand of at least n clears the market.
  payoff += demand.tail(u(n)) * price;
  return payoff;
}

std::vector<double> deviation_grid(const StrategyProfile& profile, double reserve_price, std::size_t grid_size) {
  std::vector<double> special{0.0, reserve_price};
  for (const auto& s : profile.strategies) {
    special.push_back(s.support_lo());
    special.push_back(s.support_hi());
    for (const auto& atom : s.atoms()) special.push_back(atom.price);
  }
  std::erase_if(special, [&](double p) { return p < 0.0 || p > reserve_price; });
  std::sort(special.begin(), special.end());
  special.erase(std::unique(special.begin(), special.end()), special.end());

  std::vector<double> grid = special;
  for (std::size_t i = 0; i + 1 < special.size(); ++i) grid.push_back(0.5 * (special[i] + special[i + 1]));
  for (std::size_t i = 0; i < grid_size; ++i)
    grid.push_back(reserve_price * static_cast<double>(i) / static_cast<double>(grid_size - 1));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

EquilibriumCheck check_epsilon_equilibrium(const StrategyProfile& profile, int t, const ValueTable& table,
                                           std::size_t grid_size, double eps) {
  if (grid_size < 100) throw InvalidParameter(fmt::format("deviation grid needs >= 100 points, got {}", grid_size));
  if (!(eps >= 0.0)) throw InvalidParameter(fmt::format("eps must be nonnegative, got {}", eps));
  const int n = static_cast<int>(profile.size());
  const double pbar = table.params().reserve_price;
  const auto grid = deviation_grid(profile, pbar, grid_size);
  const double value = table.value(n, t);

  EquilibriumCheck check;
  check.eps = eps;
  check.certified = true;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto& own = profile[i];
    DeviationReport report;
    report.seller_index = i;
    report.equilibrium_value = value;
    report.grid.reserve(grid.size());
    for (double p : grid) {
      const double payoff = deviation_payoff(i, p, profile, t, table);
      report.grid.emplace_back(p, payoff);
      report.best_deviation_gain = std::max(report.best_deviation_gain, payoff - value);
      const bool on_support = own.is_pure()
                                  ? std::any_of(own.atoms().begin(), own.atoms().end(),
                                                [&](const Atom& a) { return a.price == p; })
                                  : (p >= own.support_lo() && p <= own.support_hi());
      if (on_support) report.max_gap_on_support = std::max(report.max_gap_on_support, std::abs(payoff - value));
    }
    if (report.best_deviation_gain > eps || report.max_gap_on_support > eps) check.certified = false;
    check.reports.push_back(std::move(report));
  }
  return check;
}

}  // namespace edgeworth
