#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace edgeworth {

enum class DemandKind { Bernoulli, Explicit, PoissonTruncated };

inline constexpr double kDefaultTruncationTolerance = 1e-12;

/// Per-period number of arriving buyers. pmf()[i] is the probability that
/// exactly i buyers arrive. Immutable once built.
class DemandModel {
 public:
  /// One buyer with probability 1 - q, none with probability q.
  static DemandModel bernoulli(double q);
  /// Rescales proportionally when the sum is within 1e-9 of one.
  static DemandModel explicit_pmf(std::span<const double> probs);
  /// Truncates at the smallest M whose tail is <= trunc_tol and folds the
  /// residual tail into q_M.
  static DemandModel poisson(double mean,
                             double trunc_tol = kDefaultTruncationTolerance);

  DemandKind kind() const { return kind_; }
  std::span<const double> pmf() const { return pmf_; }
  std::size_t max_demand() const { return pmf_.size() - 1; }

  /// q_i, zero beyond the stored support.
  double prob(std::size_t i) const { return i < pmf_.size() ? pmf_[i] : 0.0; }
  /// Sum of q_i for i >= k.
  double tail(std::size_t k) const;
  /// Tail mass removed by truncation before folding (0 for exact models).
  double truncated_mass() const { return truncated_mass_; }

  /// Bernoulli q, Poisson mean; NaN for explicit models.
  double parameter() const { return parameter_; }
  bool is_binary() const { return kind_ == DemandKind::Bernoulli; }

  /// Smallest i with cumulative probability > u, for u in [0, 1).
  std::size_t sample(double u) const;

  /// Compact text form, e.g. "poisson(mean=0.5)".
  std::string describe() const;

 private:
  DemandModel(DemandKind kind, std::vector<double> pmf, double truncated_mass,
              double parameter);

  DemandKind kind_;
  std::vector<double> pmf_;
  std::vector<double> tails_;  // tails_[k] = sum_{i>=k} pmf_[i]
  double truncated_mass_;
  double parameter_;
};

}  // namespace edgeworth
