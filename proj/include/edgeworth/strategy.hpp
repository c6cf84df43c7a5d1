#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace edgeworth {

struct Atom {
  double price;
  double mass;
};

/// A seller's pricing strategy, stored as its CDF. Either a single atom
/// (pure strategy) or atomless on [support_lo, support_hi].
class MixedStrategyCdf {
 public:
  using Curve = std::function<double(double)>;

  static MixedStrategyCdf pure(double price);

  /// interior_cdf is consulted on the open support only and interior_quantile
  /// on (0, 1) only; both results are clamped to their ranges.
  static MixedStrategyCdf continuous(double lo, double hi, Curve interior_cdf,
                                     Curve interior_quantile);

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  std::span<const Atom> atoms() const { return atoms_; }
  bool is_pure() const { return !atoms_.empty(); }

  /// P(price <= p).
  double cdf(double p) const;
  /// P(price < p).
  double cdf_left(double p) const;
  /// inf { p : cdf(p) >= u }, with quantile(0) = support_lo.
  double quantile(double u) const;

 private:
  MixedStrategyCdf() = default;

  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<Atom> atoms_;
  Curve cdf_;
  Curve quantile_;
};

/// Inverse-transform draw from a strategy.
inline double sample_price(const MixedStrategyCdf& strategy, double u) {
  return strategy.quantile(u);
}

/// One period's strategies, indexed by seller.
struct StrategyProfile {
  std::vector<MixedStrategyCdf> strategies;
  bool symmetric = false;
  /// Built without a proof of equilibrium; certify before use.
  bool candidate = false;

  static StrategyProfile symmetric_profile(const MixedStrategyCdf& strategy, int n);

  std::size_t size() const { return strategies.size(); }
  const MixedStrategyCdf& operator[](std::size_t i) const { return strategies[i]; }
};

}  // namespace edgeworth
