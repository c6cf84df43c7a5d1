#include "edgeworth/export.hpp"

#include <fmt/format.h>

#include "edgeworth/errors.hpp"

namespace edgeworth {

namespace {

void write_header(std::ostream& os, std::string_view header) {
  if (!header.empty()) os << "# " << header << '\n';
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  return fmt::format("{:.12g}", x);
}

void write_value_table_csv(std::ostream& os, const ValueTable& table, std::string_view header) {
  write_header(os, header);
  os << "n,t,value,reservation_price\n";
  for (int n = 1; n <= table.max_sellers(); ++n) {
    for (int t = 0; t <= table.horizon(); ++t) {
      const auto reservation = table.reservation_price_if_defined(n, t);
      os << n << ',' << t << ',' << format_number(table.value(n, t)) << ','
         << (reservation ? format_number(*reservation) : std::string{}) << '\n';
    }
  }
}

void write_pure_profile_csv(std::ostream& os, const StrategyProfile& profile, std::string_view header) {
  write_header(os, header);
  os << "seller,price\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!profile[i].is_pure()) throw InvalidParameter("pure profile export given a mixed strategy");
    os << i + 1 << ',' << format_number(profile[i].atoms().front().price) << '\n';
  }
}

void write_cdf_csv(std::ostream& os, const MixedStrategyCdf& strategy, std::size_t points, std::string_view header) {
  if (points < 2) throw InvalidParameter("cdf grid needs at least two points");
  write_header(os, header);
  os << "p,cdf\n";
  const double lo = strategy.support_lo();
  const double hi = strategy.support_hi();
  for (std::size_t i = 0; i < points; ++i) {
    const double p = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    os << format_number(p) << ',' << format_number(strategy.cdf(p)) << '\n';
  }
}

void write_deviation_csv(std::ostream& os, const EquilibriumCheck& check, std::string_view header) {
  write_header(os, header);
  os << "seller,price,payoff\n";
  for (const auto& report : check.reports)
    for (const auto& [price, payoff] : report.grid)
      os << report.seller_index + 1 << ',' << format_number(price) << ',' << format_number(payoff) << '\n';
}

void write_simulation_csv(std::ostream& os, const SimulationReport& report, std::string_view header) {
  write_header(os, header);
  os << "seller,mean,ci,trials,seed\n";
  for (std::size_t i = 0; i < report.per_seller_mean_profit.size(); ++i)
    os << i + 1 << ',' << format_number(report.per_seller_mean_profit[i]) << ','
       << format_number(report.per_seller_ci_halfwidth[i]) << ',' << report.trials << ',' << report.seed << '\n';
}

void write_histogram_csv(std::ostream& os, const SimulationReport& report, std::string_view header) {
  write_header(os, header);
  os << "t,bin_lo,bin_hi,posted,transacted\n";
  for (const auto& h : report.histograms) {
    const double width = (report.histogram_hi - report.histogram_lo) / static_cast<double>(h.posted.size());
    for (std::size_t b = 0; b < h.posted.size(); ++b)
      os << h.periods_left << ',' << format_number(report.histogram_lo + width * static_cast<double>(b)) << ','
         << format_number(report.histogram_lo + width * static_cast<double>(b + 1)) << ',' << h.posted[b] << ','
         << h.transacted[b] << '\n';
  }
}

}  // namespace edgeworth
