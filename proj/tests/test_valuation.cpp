#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "edgeworth/errors.hpp"
#include "edgeworth/valuation.hpp"
#include "oracles.hpp"

using namespace edgeworth;

namespace {

MarketParams binary(double q, int n, int t) {
  MarketParams p;
  p.n_sellers = n;
  p.horizon = t;
  p.demand = DemandModel::bernoulli(q);
  return p;
}

MarketParams poisson_half(int n, int t) {
  MarketParams p;
  p.n_sellers = n;
  p.horizon = t;
  p.demand = DemandModel::poisson(0.5);
  return p;
}

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("terminal values are zero") {
  ValueTable table(poisson_half(4, 3));
  for (int n = 1; n <= 4; ++n) CHECK(table.value(n, 0) == 0.0);
}

TEST_CASE("binary anchors unrolled by hand") {
  ValueTable table(binary(0.5, 2, 3));
  CHECK(std::abs(table.value(2, 2) - 9.0) < 1e-12);
  CHECK(std::abs(table.value(2, 3) - 17.1) < 1e-12);
  CHECK(std::abs(table.reservation_price(2, 2) - 18.0) < 1e-12);
  CHECK(std::abs(table.reservation_price(2, 3) - 26.1) < 1e-12);
  CHECK(table.value(2, 1) == 0.0);
  CHECK(table.reservation_price(2, 1) == 0.0);
}

TEST_CASE("binary N=3 T=3") {
  ValueTable table(binary(0.5, 3, 3));
  CHECK(std::abs(table.value(3, 3) - 4.05) < 1e-12);
  CHECK(std::abs(table.reservation_price(3, 3) - 8.1) < 1e-12);
}

TEST_CASE("poisson anchors") {
  ValueTable table(poisson_half(4, 5));
  CHECK(table.value(1, 1) == doctest::Approx(15.738773611494663).epsilon(1e-13));
  CHECK(table.value(2, 1) == doctest::Approx(3.6081604172419945).epsilon(1e-13));
  CHECK(table.value(2, 3) == doctest::Approx(15.638541093267003).epsilon(1e-13));
  CHECK(table.value(3, 3) == doctest::Approx(6.53999843189182).epsilon(1e-13));
  CHECK(table.value(3, 2) == doctest::Approx(2.948401006438074).epsilon(1e-13));
  CHECK(table.value(4, 5) == doctest::Approx(7.0668453584075515).epsilon(1e-13));
  CHECK(table.value(3, 5) == doctest::Approx(13.880952167549685).epsilon(1e-13));
  CHECK(table.reservation_price(2, 2) == doctest::Approx(20.087670224091436).epsilon(1e-13));
  CHECK(table.reservation_price(2, 1) == doctest::Approx(9.170118349264035).epsilon(1e-13));
  CHECK(table.reservation_price(3, 3) == doctest::Approx(12.530918880520153).epsilon(1e-13));
}

TEST_CASE("table agrees with a top-down recursion") {
  for (double mean : {0.3, 0.5, 1.5}) {
    auto params = poisson_half(5, 12);
    params.demand = DemandModel::poisson(mean);
    params.discount = 0.85;
    ValueTable table(params);
    oracle::RecursiveValue ref(to_vector(params.demand.pmf()), params.discount, params.reserve_price);
    for (int n = 1; n <= 5; ++n)
      for (int t = 0; t <= 12; ++t) {
        CHECK(std::abs(table.value(n, t) - ref(n, t)) < 1e-11);
        if (n >= 2 && t >= 1) CHECK(std::abs(table.reservation_price(n, t) - ref.reservation(n, t)) < 1e-10);
      }
  }
}

TEST_CASE("binary table agrees with the telescoped sum") {
  for (double q : {0.2, 0.5, 0.8}) {
    ValueTable table(binary(q, 4, 10));
    for (int n = 1; n <= 4; ++n)
      for (int t = 0; t <= 10; ++t)
        CHECK(std::abs(table.value(n, t) - oracle::telescoped_binary_value(n, t, q, 0.9, 40.0)) < 1e-11);
  }
}

TEST_CASE("binary value is zero when sellers outnumber periods") {
  ValueTable table(binary(0.4, 5, 6));
  for (int n = 2; n <= 5; ++n)
    for (int t = 0; t < n; ++t) CHECK(table.value(n, t) == 0.0);
  CHECK(table.value(5, 5) > 0.0);
}

TEST_CASE("monopolist closed form") {
  for (double q : {0.2, 0.4, 0.6, 0.8}) {
    auto params = binary(q, 1, 60);
    ValueTable table(params);
    for (int t = 0; t <= 60; ++t) CHECK(std::abs(monopolist_value(t, params) - table.value(1, t)) < 1e-12);
  }
  auto params = poisson_half(1, 60);
  ValueTable table(params);
  for (int t = 0; t <= 60; ++t) CHECK(std::abs(monopolist_value(t, params) - table.value(1, t)) < 1e-12);
}

TEST_CASE("value properties over random markets") {
  std::uint64_t state = 12345;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 40; ++trial) {
    MarketParams p;
    p.n_sellers = 1 + static_cast<int>(next() * 5);
    p.horizon = 1 + static_cast<int>(next() * 15);
    p.reserve_price = 1.0 + 99.0 * next();
    p.discount = 0.05 + 0.95 * next();
    std::vector<double> pmf(2 + static_cast<std::size_t>(next() * 4));
    double total = 0.0;
    for (double& x : pmf) total += (x = 0.05 + next());
    for (double& x : pmf) x /= total;
    p.demand = DemandModel::explicit_pmf(pmf);
    ValueTable table(p);
    for (int n = 1; n <= p.n_sellers; ++n)
      for (int t = 1; t <= p.horizon; ++t) {
        const double v = table.value(n, t);
        CHECK(v >= 0.0);
        CHECK(v <= p.reserve_price + 1e-12);
        CHECK(v + 1e-12 >= table.value(n, t - 1));  // more time never hurts
        if (n > 1) CHECK(v <= table.value(n - 1, t) + 1e-12);  // more rivals never helps
        if (n > 1) {
          const double r = table.reservation_price(n, t);
          CHECK(r >= -1e-12);
          CHECK(r <= p.reserve_price + 1e-12);
        }
      }
  }
}

TEST_CASE("reservation price needs arriving demand") {
  std::array<double, 2> pmf{1.0, 0.0};
  MarketParams p;
  p.n_sellers = 3;
  p.horizon = 2;
  p.demand = DemandModel::explicit_pmf(pmf);
  ValueTable table(p);
  CHECK(table.value(3, 2) == 0.0);
  CHECK_THROWS_AS(table.reservation_price(3, 2), DegenerateDemand);
  CHECK_FALSE(table.reservation_price_if_defined(3, 2).has_value());
}

TEST_CASE("index and parameter validation") {
  ValueTable table(binary(0.5, 2, 3));
  CHECK_THROWS_AS(table.value(0, 1), InvalidParameter);
  CHECK_THROWS_AS(table.value(3, 1), InvalidParameter);
  CHECK_THROWS_AS(table.value(1, 4), InvalidParameter);
  CHECK_THROWS_AS(table.value(1, -1), InvalidParameter);
  CHECK_THROWS_AS(table.reservation_price(1, 2), InvalidParameter);
  CHECK_THROWS_AS(table.reservation_price(2, 0), InvalidParameter);

  MarketParams bad;
  bad.discount = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad.discount = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = MarketParams{};
  bad.reserve_price = 0.0;
  CHECK_THROWS_AS(ValueTable{bad}, InvalidParameter);
  bad = MarketParams{};
  bad.n_sellers = 0;
  CHECK_THROWS_AS(ValueTable{bad}, InvalidParameter);
}

TEST_CASE("free functions match the table") {
  auto p = poisson_half(3, 4);
  ValueTable table(p);
  CHECK(option_value(3, 4, p) == table.value(3, 4));
  CHECK(reservation_price(3, 4, p) == table.reservation_price(3, 4));
}

TEST_CASE("binary stationary values") {
  auto p = binary(0.5, 2, 1);
  auto inf = infinite_horizon(3, p);
  CHECK(std::abs(inf.value(1) - 400.0 / 11.0) < 1e-10);
  CHECK(std::abs(inf.reservation_price(2) - 360.0 / 11.0) < 1e-10);
  CHECK(std::isnan(inf.reservation_price(1)));
  CHECK(std::abs(infinite_horizon_value(1, p) - 400.0 / 11.0) < 1e-10);
}

TEST_CASE("general stationary values solve the triangular system") {
  auto p = poisson_half(5, 1);
  auto inf = infinite_horizon(5, p);
  auto ref = oracle::stationary_values(to_vector(p.demand.pmf()), 5, p.discount, p.reserve_price);
  for (int n = 1; n <= 5; ++n) CHECK(std::abs(inf.value(n) - ref[static_cast<std::size_t>(n - 1)]) < 1e-10);
}

TEST_CASE("finite values approach the stationary limit") {
  auto p = poisson_half(3, 300);
  ValueTable table(p);
  auto inf = infinite_horizon(3, p);
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(table.value(n, 300) - inf.value(n)) < 1e-9);
}

TEST_CASE("undiscounted market has no stationary solution") {
  auto p = binary(0.5, 2, 1);
  p.discount = 1.0;
  CHECK_THROWS_AS(infinite_horizon(2, p), NoFixedPoint);
}
