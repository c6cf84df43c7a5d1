#include "edgeworth/demand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "edgeworth/errors.hpp"

namespace edgeworth {

DemandModel::DemandModel(DemandKind kind, std::vector<double> pmf,
                         double truncated_mass, double parameter)
    : kind_(kind),
      pmf_(std::move(pmf)),
      truncated_mass_(truncated_mass),
      parameter_(parameter) {
  // Tails are accumulated from the right so that tail(k) for large k carries
  // no cancellation error.
  tails_.assign(pmf_.size() + 1, 0.0);
  for (std::size_t k = pmf_.size(); k-- > 0;) tails_[k] = tails_[k + 1] + pmf_[k];
}

DemandModel DemandModel::bernoulli(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw InvalidParameter(fmt::format("bernoulli q must lie in (0,1), got {}", q));
  return DemandModel(DemandKind::Bernoulli, {q, 1.0 - q}, 0.0, q);
}

DemandModel DemandModel::explicit_pmf(std::span<const double> probs) {
  if (probs.empty()) throw InvalidParameter("explicit pmf is empty");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw InvalidParameter(fmt::format("explicit pmf entry {} is not a probability", p));
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidParameter(fmt::format("explicit pmf sums to {}, not 1", sum));
  std::vector<double> pmf(probs.begin(), probs.end());
  for (double& p : pmf) p /= sum;
  return DemandModel(DemandKind::Explicit, std::move(pmf), 0.0,
                     std::numeric_limits<double>::quiet_NaN());
}

DemandModel DemandModel::poisson(double mean, double trunc_tol) {
  if (!(mean > 0.0) || !std::isfinite(mean))
    throw InvalidParameter(fmt::format("poisson mean must be positive, got {}", mean));
  if (!(trunc_tol > 0.0 && trunc_tol <= 1e-6))
    throw InvalidParameter(fmt::format("truncation tolerance must lie in (0,1e-6], got {}", trunc_tol));

  std::vector<double> pmf;
  double term = std::exp(-mean);
  double cumulative = 0.0;
  for (std::size_t i = 0;; ++i) {
    if (i > 0) term *= mean / static_cast<double>(i);
    pmf.push_back(term);
    cumulative += term;
    if (1.0 - cumulative <= trunc_tol) break;
    if (i > 100000) throw InvalidParameter("poisson mean too large to truncate");
  }
  const double tail = std::max(0.0, 1.0 - cumulative);
  pmf.back() += tail;
  return DemandModel(DemandKind::PoissonTruncated, std::move(pmf), tail, mean);
}

double DemandModel::tail(std::size_t k) const {
  return k < tails_.size() ? tails_[k] : 0.0;
}

std::size_t DemandModel::sample(double u) const {
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < pmf_.size(); ++i) {
    cumulative += pmf_[i];
    if (u < cumulative) return i;
  }
  return pmf_.size() - 1;
}

std::string DemandModel::describe() const {
  switch (kind_) {
    case DemandKind::Bernoulli:
      return fmt::format("bernoulli(q={})", parameter_);
    case DemandKind::PoissonTruncated:
      return fmt::format("poisson(mean={})", parameter_);
    case DemandKind::Explicit:
      break;
  }
  std::string out = "explicit(";
  for (std::size_t i = 0; i < pmf_.size(); ++i)
    out += fmt::format("{}{}", i ? ";" : "", pmf_[i]);
  return out + ")";
}

}  // namespace edgeworth
