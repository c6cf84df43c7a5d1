#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "edgeworth/errors.hpp"
#include "edgeworth/rng.hpp"
#include "edgeworth/verification.hpp"

namespace edgeworth {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

void check_plan(const EquilibriumPlan& plan, const MarketParams& params) {
  params.validate();
  if (params.horizon < 1) throw InvalidParameter("simulation needs horizon >= 1");
  if (plan.max_sellers() < params.n_sellers || plan.horizon() < params.horizon)
    throw InvalidParameter(fmt::format("plan covers N={} T={}, market needs N={} T={}", plan.max_sellers(),
                                       plan.horizon(), params.n_sellers, params.horizon));
  for (int t = 1; t <= params.horizon; ++t)
    for (int n = 1; n <= params.n_sellers; ++n)
      if (plan.at(n, t).size() != u(n))
        throw InvalidParameter(fmt::format("profile for state (n={}, t={}) has {} strategies", n, t,
                                           plan.at(n, t).size()));
}

struct Offer {
  double price;
  std::uint64_t tie_key;
  int position;
};

// Runs one trial into `trace`, reusing its buffers.
void run_trial(const EquilibriumPlan& plan, const MarketParams& params, std::uint64_t seed, std::uint64_t trial,
               TrialTrace& trace, std::vector<Offer>& offers) {
  const int n_total = params.n_sellers;
  const double pbar = params.reserve_price;
  trace.periods.resize(u(params.horizon));
  trace.discounted_profit.assign(u(n_total), 0.0);

  std::vector<int> alive(u(n_total));
  std::iota(alive.begin(), alive.end(), 0);

  double discount = 1.0;
  std::size_t used = 0;
  for (int t = params.horizon; t >= 1 && !alive.empty(); --t, discount *= params.discount) {
    const int n = static_cast<int>(alive.size());
    const auto& profile = plan.at(n, t);
    PeriodTrace& period = trace.periods[used++];
    period.periods_left = t;
    period.sellers = n;
    period.seller_ids = alive;
    period.posted.resize(u(n));
    period.buyers.clear();
    period.sale_prices.clear();

    const auto period_key = static_cast<std::uint64_t>(t);
    offers.clear();
    for (int j = 0; j < n; ++j) {
      SplitMix64 stream(substream_seed(seed, trial, period_key, static_cast<std::uint64_t>(alive[u(j)])));
      const double price = sample_price(profile[u(j)], stream.uniform());
      period.posted[u(j)] = price;
      offers.push_back({price, stream.next(), j});
    }
    SplitMix64 demand_stream(substream_seed(seed, trial, period_key, static_cast<std::uint64_t>(n_total)));
    period.demand = params.demand.sample(demand_stream.uniform());

    std::sort(offers.begin(), offers.end(), [](const Offer& a, const Offer& b) {
      return a.price != b.price ? a.price < b.price : a.tie_key < b.tie_key;
    });
    std::vector<bool> sold(u(n), false);
    std::size_t units = period.demand;
    for (const auto& offer : offers) {
      if (units == 0 || offer.price > pbar) break;
      --units;
      sold[u(offer.position)] = true;
      const int id = alive[u(offer.position)];
      period.buyers.push_back(id);
      period.sale_prices.push_back(offer.price);
      trace.discounted_profit[u(id)] += discount * offer.price;
    }
    std::vector<int> next;
    next.reserve(alive.size());
    for (int j = 0; j < n; ++j)
      if (!sold[u(j)]) next.push_back(alive[u(j)]);
    alive.swap(next);
  }
  trace.periods.resize(used);
}

}  // namespace

void RunningStats::add(double x) {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

TrialTrace simulate_trial(const EquilibriumPlan& plan, const MarketParams& params, std::uint64_t seed,
                          std::uint64_t trial) {
  check_plan(plan, params);
  TrialTrace trace;
  std::vector<Offer> offers;
  run_trial(plan, params, seed, trial, trace, offers);
  return trace;
}

SimulationReport simulate_market(const EquilibriumPlan& plan, const MarketParams& params, std::uint64_t trials,
                                 std::uint64_t seed, int histogram_bins) {
  if (trials < 1) throw InvalidParameter("simulation needs at least one trial");
  if (histogram_bins < 1) throw InvalidParameter("histogram needs at least one bin");
  check_plan(plan, params);

  const int n_total = params.n_sellers;
  const double pbar = params.reserve_price;
  SimulationReport report;
  report.trials = trials;
  report.seed = seed;
  report.histogram_lo = 0.0;
  report.histogram_hi = pbar;
  for (int t = params.horizon; t >= 1; --t)
    report.histograms.push_back({t, std::vector<std::uint64_t>(u(histogram_bins), 0),
                                 std::vector<std::uint64_t>(u(histogram_bins), 0)});

  auto bin_of = [&](double p) {
    const auto b = static_cast<long>(std::floor(p / pbar * histogram_bins));
    return u(static_cast<int>(std::clamp<long>(b, 0, histogram_bins - 1)));
  };

  std::vector<RunningStats> profit(u(n_total));
  TrialTrace trace;
  std::vector<Offer> offers;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    run_trial(plan, params, seed, trial, trace, offers);
    for (int i = 0; i < n_total; ++i) profit[u(i)].add(trace.discounted_profit[u(i)]);
    for (const auto& period : trace.periods) {
      auto& hist = report.histograms[u(params.horizon - period.periods_left)];
      for (double p : period.posted) ++hist.posted[bin_of(p)];
      auto& stats = report.transactions[{period.periods_left, period.sellers}];
      for (double p : period.sale_prices) {
        ++hist.transacted[bin_of(p)];
        stats.add(p);
      }
    }
  }

  const double z95 = 1.959963984540054;
  for (const auto& s : profit) {
    report.per_seller_mean_profit.push_back(s.mean);
    report.per_seller_ci_halfwidth.push_back(z95 * std::sqrt(s.sample_variance() / static_cast<double>(trials)));
  }
  return report;
}

std::vector<PeriodDispersion> effective_price_dispersion(const SimulationReport& report) {
  std::vector<PeriodDispersion> out;
  for (const auto& hist : report.histograms) {
    std::uint64_t count = 0;
    double m2 = 0.0;
    for (const auto& [state, stats] : report.transactions) {
      if (state.first != hist.periods_left) continue;
      count += stats.count;
      m2 += stats.m2;
    }
    PeriodDispersion d{hist.periods_left, std::nullopt};
    if (count > 0) d.std_dev = std::sqrt(m2 / static_cast<double>(count));
    out.push_back(d);
  }
  return out;
}

}  // namespace edgeworth
