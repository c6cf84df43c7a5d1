#include "edgeworth/strategy.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "edgeworth/errors.hpp"

namespace edgeworth {

MixedStrategyCdf MixedStrategyCdf::pure(double price) {
  if (!std::isfinite(price)) throw InvalidParameter("pure strategy price must be finite");
  MixedStrategyCdf s;
  s.lo_ = s.hi_ = price;
  s.atoms_.push_back({price, 1.0});
  return s;
}

MixedStrategyCdf MixedStrategyCdf::continuous(double lo, double hi, Curve interior_cdf,
                                              Curve interior_quantile) {
  if (!(lo < hi)) throw InvalidParameter(fmt::format("empty support [{}, {}]", lo, hi));
  MixedStrategyCdf s;
  s.lo_ = lo;
  s.hi_ = hi;
  s.cdf_ = std::move(interior_cdf);
  s.quantile_ = std::move(interior_quantile);
  return s;
}

double MixedStrategyCdf::cdf(double p) const {
  if (is_pure()) return p >= atoms_.front().price ? 1.0 : 0.0;
  if (p <= lo_) return 0.0;
  if (p >= hi_) return 1.0;
  return std::clamp(cdf_(p), 0.0, 1.0);
}

double MixedStrategyCdf::cdf_left(double p) const {
  if (is_pure()) return p > atoms_.front().price ? 1.0 : 0.0;
  return cdf(p);
}

double MixedStrategyCdf::quantile(double u) const {
  if (is_pure()) return atoms_.front().price;
  if (u <= 0.0) return lo_;
  if (u >= 1.0) return hi_;
  return std::clamp(quantile_(u), lo_, hi_);
}

StrategyProfile StrategyProfile::symmetric_profile(const MixedStrategyCdf& strategy, int n) {
  if (n < 1) throw InvalidParameter(fmt::format("profile needs at least one seller, got {}", n));
  StrategyProfile profile;
  profile.strategies.assign(static_cast<std::size_t>(n), strategy);
  profile.symmetric = true;
  return profile;
}

}  // namespace edgeworth
