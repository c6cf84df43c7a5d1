#include "edgeworth/cli/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "edgeworth/equilibrium.hpp"
#include "edgeworth/errors.hpp"
#include "edgeworth/export.hpp"
#include "edgeworth/verification.hpp"

namespace edgeworth::cli {

namespace {

constexpr std::size_t kDefaultDeviationGrid = 400;
constexpr std::size_t kPlanCheckGrid = 200;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << contents;
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

StrategyProfile all_at_reserve(int n, double reserve_price) {
  return StrategyProfile::symmetric_profile(MixedStrategyCdf::pure(reserve_price), n);
}

void log_check(std::ostream& log, const EquilibriumCheck& check) {
  for (const auto& r : check.reports)
    log << fmt::format("seller {}: V={} max_gap_on_support={:.3e} best_deviation_gain={:.3e}\n", r.seller_index + 1,
                       format_number(r.equilibrium_value), r.max_gap_on_support, r.best_deviation_gain);
  log << (check.certified ? "certified" : "NOT certified") << fmt::format(" (eps={:.3e})\n", check.eps);
}

void require_horizon(const RunConfig& config) {
  if (config.horizon < 1) throw ConfigError("this command needs horizon >= 1");
}

}  // namespace

int cmd_values(const RunConfig& config, const std::filesystem::path& out_path, std::ostream& log) {
  const ValueTable table(config.market());
  std::ostringstream csv;
  write_value_table_csv(csv, table, header_line("values", config));
  write_file(out_path, csv.str());

  const int n = config.n_sellers;
  const int t = config.horizon;
  log << fmt::format("V({}, {}) = {}\n", n, t, format_number(table.value(n, t)));
  if (const auto p = table.reservation_price_if_defined(n, t))
    log << fmt::format("P*({}, {}) = {}\n", n, t, format_number(*p));
  return kSuccess;
}

int cmd_equilibrium(const RunConfig& config, const std::filesystem::path& out_path, std::ostream& log) {
  require_horizon(config);
  const ValueTable table(config.market());
  const int n = config.n_sellers;
  const int t = config.horizon;
  const Variant variant = infer_variant(n, table.params().demand);
  const StrategyProfile profile = equilibrium_profile(n, t, table);
  log << fmt::format("variant: {}\n", variant_name(variant));

  if (profile.candidate) {
    const auto check = check_epsilon_equilibrium(profile, t, table, config.grid.value_or(kDefaultDeviationGrid),
                                                 config.eps_or_default());
    if (!check.certified) {
      log_check(log, check);
      return kNotCertified;
    }
  }

  std::ostringstream csv;
  const auto header = header_line("equilibrium", config);
  if (profile[0].is_pure()) {
    write_pure_profile_csv(csv, profile, header);
    for (std::size_t i = 0; i < profile.size(); ++i)
      log << fmt::format("seller {} posts {}\n", i + 1, format_number(profile[i].atoms().front().price));
  } else {
    write_cdf_csv(csv, profile[0], config.grid.value_or(kDefaultCdfGridPoints), header);
    log << fmt::format("mixed support [{}, {}]\n", format_number(profile[0].support_lo()),
                       format_number(profile[0].support_hi()));
  }
  write_file(out_path, csv.str());
  return kSuccess;
}

int cmd_verify(const RunConfig& config, const std::filesystem::path& out_path, std::ostream& log) {
  require_horizon(config);
  const ValueTable table(config.market());
  const int n = config.n_sellers;
  const int t = config.horizon;
  const StrategyProfile profile = config.profile == ProfileOverride::AllAtReserve
                                      ? all_at_reserve(n, config.reserve_price)
                                      : equilibrium_profile(n, t, table);
  const auto check =
      check_epsilon_equilibrium(profile, t, table, config.grid.value_or(kDefaultDeviationGrid), config.eps_or_default());
  std::ostringstream csv;
  write_deviation_csv(csv, check, header_line("verify", config));
  write_file(out_path, csv.str());
  log_check(log, check);
  return check.certified ? kSuccess : kNotCertified;
}

int cmd_simulate(const RunConfig& config, const std::filesystem::path& out_path, std::ostream& log) {
  require_horizon(config);
  if (config.trials < 1) throw ConfigError("trials must be >= 1");
  const ValueTable table(config.market());
  const auto plan = EquilibriumPlan::build(table);
  for (int t = 1; t <= table.horizon(); ++t) {
    for (int n = 1; n <= table.max_sellers(); ++n) {
      const auto& profile = plan.at(n, t);
      if (!profile.candidate) continue;
      const auto check = check_epsilon_equilibrium(profile, t, table, kPlanCheckGrid, config.eps_or_default());
      if (!check.certified) {
        log << fmt::format("candidate profile for state (n={}, t={}) failed certification\n", n, t);
        log_check(log, check);
        return kNotCertified;
      }
    }
  }

  const auto report = simulate_market(plan, table.params(), config.trials, config.seed, config.histogram_bins);
  std::ostringstream csv;
  write_simulation_csv(csv, report, header_line("simulate", config));
  write_file(out_path, csv.str());
  auto hist_path = out_path;
  hist_path.replace_filename(out_path.stem().string() + "_histogram" + out_path.extension().string());
  std::ostringstream hist;
  write_histogram_csv(hist, report);
  write_file(hist_path, hist.str());

  const double dp = table.value(config.n_sellers, config.horizon);
  for (std::size_t i = 0; i < report.per_seller_mean_profit.size(); ++i)
    log << fmt::format("seller {}: mean {} +/- {} (DP value {})\n", i + 1,
                       format_number(report.per_seller_mean_profit[i]),
                       format_number(report.per_seller_ci_halfwidth[i]), format_number(dp));
  for (const auto& d : effective_price_dispersion(report))
    log << fmt::format("period t={}: transacted price std {}\n", d.periods_left,
                       d.std_dev ? format_number(*d.std_dev) : std::string("undefined"));
  return kSuccess;
}

namespace {

int converge_one(const RunConfig& config, const std::filesystem::path& out_path, std::ostream& log) {
  if (config.tmax < 2) throw ConfigError("tmax must be >= 2");
  RunConfig run = config;
  run.horizon = config.tmax;
  const MarketParams market = run.market();
  const auto limit = infinite_horizon(market.n_sellers, market);
  const ValueTable table(market);
  const int n = market.n_sellers;

  std::ostringstream csv;
  csv << "# " << header_line("converge", run) << '\n';
  if (market.demand.is_binary() && n >= 2) {
    const double p_inf = limit.reservation_price(n);
    csv << "T,p_star,p_star_inf,gap\n";
    double gap = 0.0;
    for (int t = 2; t <= run.tmax; ++t) {
      const double p = table.reservation_price(n, t);
      gap = std::abs(p - p_inf);
      csv << t << ',' << format_number(p) << ',' << format_number(p_inf) << ',' << format_number(gap) << '\n';
    }
    log << fmt::format("P*({}, {}) gap to stationary {} is {:.3e}\n", n, run.tmax, format_number(p_inf), gap);
  } else {
    const double v_inf = limit.value(n);
    std::vector<double> reference;
    if (n >= 2) {
      const OligopolyG stationary(n, market, limit.values);
      reference = {stationary(0.25), stationary(0.5), stationary(0.75)};
      csv << fmt::format("# reference prices (stationary quartiles): {},{},{}\n", format_number(reference[0]),
                         format_number(reference[1]), format_number(reference[2]));
      csv << "T,value,value_inf,gap,cdf_at_q25,cdf_at_q50,cdf_at_q75\n";
    } else {
      csv << "T,value,value_inf,gap\n";
    }
    double gap = 0.0;
    for (int t = 2; t <= run.tmax; ++t) {
      const double v = table.value(n, t);
      gap = std::abs(v - v_inf);
      csv << t << ',' << format_number(v) << ',' << format_number(v_inf) << ',' << format_number(gap);
      if (!reference.empty()) {
        const auto profile = equilibrium_profile(n, t, table);
        for (double p : reference) csv << ',' << format_number(profile[0].cdf(p));
      }
      csv << '\n';
    }
    log << fmt::format("V({}, {}) gap to stationary {} is {:.3e}\n", n, run.tmax, format_number(v_inf), gap);
  }
  write_file(out_path, csv.str());
  return kSuccess;
}

}  // namespace

int cmd_converge(const RunConfig& config, const std::filesystem::path& out_path, std::ostream& log) {
  if (config.sweep_q.empty()) return converge_one(config, out_path, log);
  if (config.demand.kind != "bernoulli") throw ConfigError("sweep_q needs bernoulli demand");
  for (double q : config.sweep_q) {
    RunConfig one = config;
    one.sweep_q.clear();
    one.demand.q = q;
    auto path = out_path;
    path.replace_filename(fmt::format("{}_q{}{}", out_path.stem().string(), q, out_path.extension().string()));
    log << fmt::format("q={} -> {}\n", q, path.string());
    converge_one(one, path, log);
  }
  return kSuccess;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibrium pricing engine for perishable one-unit sellers", "edgeworth"};
  app.require_subcommand(1);

  struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::size_t> grid;
    std::optional<double> eps;
    std::optional<int> tmax;
    std::optional<std::string> profile;
    std::optional<int> histogram_bins;
    std::vector<double> sweep_q;
  } opt;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"values", "option values and reservation prices"},
      {"equilibrium", "equilibrium strategy for (N, T)"},
      {"verify", "certify an epsilon-equilibrium with the deviation oracle"},
      {"simulate", "Monte Carlo simulation of the full market"},
      {"converge", "finite vs stationary horizon comparison"}};
  for (const auto& [name, description] : commands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", opt.config, "configuration file (or a CSV written by this tool)");
    sub->add_option("--out", opt.out, "output CSV path");
    sub->add_option("--seed", opt.seed, "64-bit simulation seed");
    sub->add_option("--trials", opt.trials, "Monte Carlo trials");
    sub->add_option("--grid", opt.grid, "CDF grid points or deviation grid size");
    sub->add_option("--eps", opt.eps, "certification tolerance");
    sub->add_option("--tmax", opt.tmax, "largest horizon for converge");
    if (name == "verify") sub->add_option("--profile", opt.profile, "equilibrium | all_at_reserve");
    if (name == "simulate") sub->add_option("--histogram-bins", opt.histogram_bins, "price histogram bins");
    if (name == "converge") sub->add_option("--sweep-q", opt.sweep_q, "Bernoulli q values, one file each")->delimiter(',');
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig config;
    if (!opt.config.empty()) {
      auto loaded = load_config(opt.config);
      if (loaded.command && *loaded.command != command)
        throw ConfigError(fmt::format("'{}' was written by '{}', not '{}'", opt.config, *loaded.command, command));
      config = std::move(loaded.config);
    }
    if (opt.seed) config.seed = *opt.seed;
    if (opt.trials) config.trials = *opt.trials;
    if (opt.grid) config.grid = *opt.grid;
    if (opt.eps) config.eps = *opt.eps;
    if (opt.tmax) config.tmax = *opt.tmax;
    if (opt.histogram_bins) config.histogram_bins = *opt.histogram_bins;
    if (opt.profile) apply_setting(config, "profile", *opt.profile);
    if (!opt.sweep_q.empty()) config.sweep_q = opt.sweep_q;
    const std::filesystem::path out_path = opt.out.empty() ? command + ".csv" : opt.out;

    if (command == "values") return cmd_values(config, out_path, out);
    if (command == "equilibrium") return cmd_equilibrium(config, out_path, out);
    if (command == "verify") return cmd_verify(config, out_path, out);
    if (command == "simulate") return cmd_simulate(config, out_path, out);
    return cmd_converge(config, out_path, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidParameter& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const PreconditionError& e) {
    err << "model precondition violated: " << e.what() << '\n';
    return kPreconditionFailed;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace edgeworth::cli
