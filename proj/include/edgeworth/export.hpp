#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>

#include "edgeworth/strategy.hpp"
#include "edgeworth/valuation.hpp"
#include "edgeworth/verification.hpp"

namespace edgeworth {

inline constexpr std::size_t kDefaultCdfGridPoints = 512;

/// Fixed 12-significant-digit rendering used for every CSV number.
std::string format_number(double x);

// Every writer emits `header` as a leading "# " comment when non-empty, then
// a column line, then rows terminated by '\n'.

/// n,t,value,reservation_price; n ascending then t ascending.
void write_value_table_csv(std::ostream& os, const ValueTable& table, std::string_view header = {});

/// seller,price for profiles made of pure strategies (1-based sellers).
void write_pure_profile_csv(std::ostream& os, const StrategyProfile& profile, std::string_view header = {});

/// p,cdf on a uniform grid over [support_lo, support_hi].
void write_cdf_csv(std::ostream& os, const MixedStrategyCdf& strategy, std::size_t points = kDefaultCdfGridPoints,
                   std::string_view header = {});

/// seller,price,payoff for each deviation report.
void write_deviation_csv(std::ostream& os, const EquilibriumCheck& check, std::string_view header = {});

/// seller,mean,ci,trials,seed.
void write_simulation_csv(std::ostream& os, const SimulationReport& report, std::string_view header = {});

// Posted and transacted price counts per period, one row per bin.
void write_histogram_csv(std::ostream& os, const SimulationReport& report, std::string_view header = {});

}  // namespace edgeworth
