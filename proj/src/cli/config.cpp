#include "edgeworth/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace edgeworth::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw ConfigError(fmt::format("{}: cannot parse '{}'", key, text));
  return value;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number<double>(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError(fmt::format("{}: empty list", key));
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += fmt::format("{}{}", i ? "," : "", xs[i]);
  return out;
}

// Collapses whitespace around '=' so "key = value" becomes one token.
std::string normalize(std::string_view line) {
  std::string out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '=') {
      while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
      out += '=';
      while (i + 1 < line.size() && (line[i + 1] == ' ' || line[i + 1] == '\t')) ++i;
    } else {
      out += line[i];
    }
  }
  return out;
}

void apply_line(RunConfig& config, std::string_view line, std::string_view prefix) {
  std::istringstream tokens{normalize(line)};
  std::string token;
  while (tokens >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(fmt::format("expected key=value, got '{}'", token));
    apply_setting(config, std::string(prefix) + token.substr(0, eq), std::string_view(token).substr(eq + 1));
  }
}

}  // namespace

DemandModel DemandSpec::build() const {
  if (kind == "bernoulli") return DemandModel::bernoulli(q);
  if (kind == "explicit") return DemandModel::explicit_pmf(probs);
  if (kind == "poisson") return DemandModel::poisson(mean, trunc_tol);
  throw ConfigError(fmt::format("unknown demand kind '{}'", kind));
}

MarketParams RunConfig::market() const {
  MarketParams p{n_sellers, horizon, reserve_price, discount, demand.build()};
  p.validate();
  return p;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "n_sellers") c.n_sellers = parse_number<int>(key, value);
  else if (key == "horizon") c.horizon = parse_number<int>(key, value);
  else if (key == "reserve_price") c.reserve_price = parse_number<double>(key, value);
  else if (key == "discount") c.discount = parse_number<double>(key, value);
  else if (key == "demand.kind") c.demand.kind = std::string(value);
  else if (key == "demand.q") c.demand.q = parse_number<double>(key, value);
  else if (key == "demand.probs") c.demand.probs = parse_list(key, value);
  else if (key == "demand.mean") c.demand.mean = parse_number<double>(key, value);
  else if (key == "demand.trunc_tol") c.demand.trunc_tol = parse_number<double>(key, value);
  else if (key == "grid") c.grid = parse_number<std::size_t>(key, value);
  else if (key == "trials") c.trials = parse_number<std::uint64_t>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "eps") c.eps = parse_number<double>(key, value);
  else if (key == "tmax") c.tmax = parse_number<int>(key, value);
  else if (key == "histogram_bins") c.histogram_bins = parse_number<int>(key, value);
  else if (key == "sweep_q") c.sweep_q = parse_list(key, value);
  else if (key == "profile") {
    if (value == "equilibrium") c.profile = ProfileOverride::Equilibrium;
    else if (value == "all_at_reserve") c.profile = ProfileOverride::AllAtReserve;
    else throw ConfigError(fmt::format("profile: expected equilibrium or all_at_reserve, got '{}'", value));
  } else {
    throw ConfigError(fmt::format("unknown setting '{}'", key));
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::string prefix;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[demand]") prefix = "demand.";
      else throw ConfigError(fmt::format("line {}: unknown section {}", line_no, line));
      continue;
    }
    try {
      apply_line(base, line, prefix);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return base;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  constexpr std::string_view replay_prefix = "# edgeworth ";
  if (std::string_view(text).starts_with(replay_prefix)) {
    std::string_view line = std::string_view(text).substr(replay_prefix.size());
    line = line.substr(0, line.find('\n'));
    const auto space = line.find(' ');
    LoadedConfig loaded;
    loaded.command = std::string(line.substr(0, space));
    if (space != std::string_view::npos) apply_line(loaded.config, line.substr(space + 1), "");
    return loaded;
  }
  return {parse_config(text), std::nullopt};
}

std::string header_line(std::string_view command, const RunConfig& c) {
  std::string out = fmt::format("edgeworth {} n_sellers={} horizon={} reserve_price={} discount={} demand.kind={}",
                                command, c.n_sellers, c.horizon, c.reserve_price, c.discount, c.demand.kind);
  if (c.demand.kind == "bernoulli") out += fmt::format(" demand.q={}", c.demand.q);
  else if (c.demand.kind == "explicit") out += fmt::format(" demand.probs={}", join(c.demand.probs));
  else out += fmt::format(" demand.mean={} demand.trunc_tol={}", c.demand.mean, c.demand.trunc_tol);

  if (command == "equilibrium" || command == "verify") {
    if (c.grid) out += fmt::format(" grid={}", *c.grid);
    out += fmt::format(" eps={}", c.eps_or_default());
  }
  if (command == "verify")
    out += fmt::format(" profile={}", c.profile == ProfileOverride::AllAtReserve ? "all_at_reserve" : "equilibrium");
  if (command == "simulate")
    out += fmt::format(" trials={} seed={} histogram_bins={} eps={}", c.trials, c.seed, c.histogram_bins,
                       c.eps_or_default());
  if (command == "converge") out += fmt::format(" tmax={}", c.tmax);
  return out;
}

}  // namespace edgeworth::cli
