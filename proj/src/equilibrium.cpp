#include "edgeworth/equilibrium.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "edgeworth/errors.hpp"

namespace edgeworth {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

void require_period(int t, const ValueTable& table) {
  if (t < 1 || t > table.horizon())
    throw InvalidParameter(fmt::format("period {} outside [1, {}]", t, table.horizon()));
}

void require_sellers(int n, const ValueTable& table) {
  if (n < 1 || n > table.max_sellers())
    throw InvalidParameter(fmt::format("seller count {} outside [1, {}]", n, table.max_sellers()));
}

// Binomial coefficients C(m, i) for i = 0..m.
std::vector<double> binomial_row(int m) {
  std::vector<double> row(u(m + 1), 1.0);
  for (int i = 1; i < m; ++i) row[u(i)] = row[u(i - 1)] * (m - i + 1) / i;
  return row;
}

}  // namespace

Variant infer_variant(int n, const DemandModel& demand) {
  if (n < 1) throw InvalidParameter(fmt::format("seller count must be >= 1, got {}", n));
  if (n == 1) return Variant::Monopoly;
  if (demand.is_binary()) return n == 2 ? Variant::DuopolyBinary : Variant::OligopolyBinary;
  return n == 2 ? Variant::DuopolyGeneral : Variant::OligopolyGeneral;
}

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::Monopoly: return "monopoly";
    case Variant::DuopolyBinary: return "duopoly-binary";
    case Variant::OligopolyBinary: return "oligopoly-binary";
    case Variant::DuopolyGeneral: return "duopoly-general";
    case Variant::OligopolyGeneral: return "oligopoly-general";
  }
  return "unknown";
}

StrategyProfile duopoly_binary_equilibrium(int t, const ValueTable& table) {
  if (!table.params().demand.is_binary())
    throw WrongVariant("duopoly binary equilibrium needs Bernoulli demand");
  require_sellers(2, table);
  require_period(t, table);
  const double price = t == 1 ? 0.0 : table.reservation_price(2, t);
  return StrategyProfile::symmetric_profile(MixedStrategyCdf::pure(price), 2);
}

StrategyProfile oligopoly_binary_candidate(int n, int t, const ValueTable& table) {
  if (!table.params().demand.is_binary())
    throw WrongVariant("oligopoly binary candidate needs Bernoulli demand");
  if (n < 3) throw InvalidParameter(fmt::format("oligopoly needs n >= 3, got {}", n));
  require_sellers(n, table);
  require_period(t, table);
  const double floor_price = table.reservation_price(n, t);
  const double pbar = table.params().reserve_price;
  StrategyProfile profile;
  profile.strategies.reserve(u(n));
  for (int i = 0; i < n; ++i)
    profile.strategies.push_back(MixedStrategyCdf::pure(i < 2 ? floor_price : pbar));
  profile.candidate = true;
  return profile;
}

MixedStrategyCdf duopoly_general_cdf(int t, const ValueTable& table) {
  require_sellers(2, table);
  require_period(t, table);
  const auto& params = table.params();
  const auto& demand = params.demand;
  const double q0 = demand.prob(0);
  const double q1 = demand.prob(1);
  if (!(q1 > 0.0)) throw ConditionsViolated("duopoly mixed equilibrium needs q_1 > 0");
  if (!(demand.tail(2) > 0.0))
    throw ConditionsViolated("duopoly mixed equilibrium needs P(demand >= 2) > 0");

  const double delta = params.discount;
  // cdf(p) = (a - s p) / (q1 (b - p)) with b the value of letting the rival sell.
  const double a = table.value(2, t) - q0 * delta * table.value(2, t - 1);
  const double s = demand.tail(1);
  const double b = delta * table.value(1, t - 1);
  const double lo = table.reservation_price(2, t);
  const double hi = params.reserve_price;
  return MixedStrategyCdf::continuous(
      lo, hi, [=](double p) { return (a - s * p) / (q1 * (b - p)); },
      [=](double x) { return (a - x * q1 * b) / (s - x * q1); });
}

double z_function(int k, int n, double x) {
  if (n < 1) throw InvalidParameter(fmt::format("Z needs n >= 1, got {}", n));
  if (k < 0 || k > n - 1)
    throw InvalidParameter(fmt::format("Z needs 0 <= k <= n-1, got k={} n={}", k, n));
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidParameter(fmt::format("Z needs x in [0,1], got {}", x));
  const int m = n - 1;
  const auto binom = binomial_row(m);
  double sum = 0.0;
  for (int i = 0; i <= k; ++i) sum += binom[u(i)] * std::pow(1.0 - x, m - i) * std::pow(x, i);
  return sum;
}

namespace {

std::vector<double> next_period_values(int n, int t, const ValueTable& table) {
  if (n < 2) throw InvalidParameter(fmt::format("G needs n >= 2, got {}", n));
  require_sellers(n, table);
  require_period(t, table);
  std::vector<double> out;
  for (int m = 1; m < n; ++m) out.push_back(table.value(m, t - 1));
  return out;
}

}  // namespace

OligopolyG::OligopolyG(int n, int t, const ValueTable& table)
    : OligopolyG(n, table.params(), next_period_values(n, t, table)) {}

OligopolyG::OligopolyG(int n, const MarketParams& params, std::span<const double> next_values)
    : n_(n), reserve_price_(params.reserve_price) {
  if (n < 2) throw InvalidParameter(fmt::format("G needs n >= 2, got {}", n));
  if (next_values.size() < u(n - 1))
    throw InvalidParameter(fmt::format("G needs {} continuation values, got {}", n - 1, next_values.size()));
  binomial_ = binomial_row(n - 1);
  const auto& demand = params.demand;
  if (!(demand.tail(2) > 0.0))
    throw ConditionsViolated("symmetric mixed equilibrium needs P(demand >= 2) > 0");
  tail_ = demand.tail(u(n));
  if (!(tail_ > 0.0))
    throw ConditionsViolated(fmt::format("symmetric mixed equilibrium needs P(demand >= {}) > 0", n));
  double low_demand = 0.0;
  for (int i = 1; i < n; ++i) {
    weights_.push_back(demand.prob(u(i)));
    continuation_.push_back(params.discount * next_values[u(n - i - 1)]);
    low_demand += demand.prob(u(i));
  }
  if (!(low_demand > 0.0))
    throw ConditionsViolated(fmt::format("symmetric mixed equilibrium needs P(1 <= demand <= {}) > 0", n - 1));
}

double OligopolyG::operator()(double x) const {
  // Z_{i-1,n}(x) for i = 1..n-1 as running sums of binomial terms.
  const int m = n_ - 1;
  double num = tail_ * reserve_price_;
  double den = tail_;
  double z = 0.0;
  for (int i = 1; i <= m; ++i) {
    const int j = i - 1;
    z += binomial_[u(j)] * std::pow(1.0 - x, m - j) * std::pow(x, j);
    num += weights_[u(j)] * z * continuation_[u(j)];
    den += weights_[u(j)] * z;
  }
  return num / den;
}

double oligopoly_G(double x, int n, int t, const ValueTable& table) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidParameter(fmt::format("G needs x in [0,1], got {}", x));
  return OligopolyG(n, t, table)(x);
}

MixedStrategyCdf oligopoly_general_cdf(int n, int t, const ValueTable& table,
                                       std::optional<double> inv_tol) {
  const OligopolyG g(n, t, table);
  const double pbar = table.params().reserve_price;
  const double tol = inv_tol.value_or(1e-10 * pbar);
  if (!(tol > 0.0)) throw InvalidParameter("inversion tolerance must be positive");
  const double lo = table.reservation_price(n, t);
  const double g0 = g(0.0);
  const double g1 = g(1.0);
  if (std::abs(g0 - lo) > tol || std::abs(g1 - pbar) > tol)
    throw InternalConsistency(fmt::format(
        "G endpoints ({}, {}) disagree with support [{}, {}]", g0, g1, lo, pbar));

  auto invert = [g, g0, g1, tol](double p) {
    if (p <= g0) return 0.0;
    if (p >= g1) return 1.0;
    double a = 0.0;
    double b = 1.0;
    for (;;) {
      const double mid = std::midpoint(a, b);
      if (mid <= a || mid >= b) break;
      (g(mid) < p ? a : b) = mid;
    }
    const double x = std::abs(g(a) - p) <= std::abs(g(b) - p) ? a : b;
    if (std::abs(g(x) - p) > tol)
      throw InternalConsistency(fmt::format("G inversion missed price {} by {}", p, std::abs(g(x) - p)));
    return x;
  };
  return MixedStrategyCdf::continuous(lo, pbar, invert, g);
}

StrategyProfile equilibrium_profile(int n, int t, const ValueTable& table) {
  require_sellers(n, table);
  require_period(t, table);
  switch (infer_variant(n, table.params().demand)) {
    case Variant::Monopoly:
      return StrategyProfile::symmetric_profile(MixedStrategyCdf::pure(table.params().reserve_price), 1);
    case Variant::DuopolyBinary:
      return duopoly_binary_equilibrium(t, table);
    case Variant::OligopolyBinary:
      return oligopoly_binary_candidate(n, t, table);
    case Variant::DuopolyGeneral:
      return StrategyProfile::symmetric_profile(duopoly_general_cdf(t, table), 2);
    case Variant::OligopolyGeneral:
      return StrategyProfile::symmetric_profile(oligopoly_general_cdf(n, t, table), n);
  }
  throw InternalConsistency("unhandled variant");
}

EquilibriumPlan::EquilibriumPlan(int max_sellers, int horizon)
    : max_sellers_(max_sellers), horizon_(horizon) {
  if (max_sellers < 1 || horizon < 1)
    throw InvalidParameter(fmt::format("plan needs N >= 1 and T >= 1, got N={} T={}", max_sellers, horizon));
}

EquilibriumPlan EquilibriumPlan::build(const ValueTable& table) {
  EquilibriumPlan plan(table.max_sellers(), table.horizon());
  for (int t = 1; t <= table.horizon(); ++t)
    for (int n = 1; n <= table.max_sellers(); ++n) plan.set(n, t, equilibrium_profile(n, t, table));
  return plan;
}

void EquilibriumPlan::set(int n, int t, StrategyProfile profile) {
  if (n < 1 || n > max_sellers_ || t < 1 || t > horizon_)
    throw InvalidParameter(fmt::format("state (n={}, t={}) outside plan [1,{}]x[1,{}]", n, t, max_sellers_, horizon_));
  if (profile.size() != u(n))
    throw InvalidParameter(fmt::format("profile for n={} has {} strategies", n, profile.size()));
  profiles_.insert_or_assign({n, t}, std::move(profile));
}

bool EquilibriumPlan::contains(int n, int t) const { return profiles_.contains({n, t}); }

const StrategyProfile& EquilibriumPlan::at(int n, int t) const {
  auto it = profiles_.find({n, t});
  if (it == profiles_.end())
    throw InvalidParameter(fmt::format("no strategy profile for state (n={}, t={})", n, t));
  return it->second;
}

void EquilibriumPlan::validate() const {
  for (int t = 1; t <= horizon_; ++t)
    for (int n = 1; n <= max_sellers_; ++n)
      if (at(n, t).size() != u(n))
        throw InvalidParameter(fmt::format("profile for n={} has {} strategies", n, at(n, t).size()));
}

}  // namespace edgeworth
