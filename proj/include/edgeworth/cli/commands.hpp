#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "edgeworth/cli/config.hpp"

namespace edgeworth::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,
  kIoError = 2,
  kPreconditionFailed = 3,
  kNotCertified = 4,
  kInternalError = 5,
};

int cmd_values(const RunConfig& config, const std::filesystem::path& out_path, std::ostream& log);
int cmd_equilibrium(const RunConfig& config, const std::filesystem::path& out_path, std::ostream& log);
int cmd_verify(const RunConfig& config, const std::filesystem::path& out_path, std::ostream& log);
int cmd_simulate(const RunConfig& config, const std::filesystem::path& out_path, std::ostream& log);
int cmd_converge(const RunConfig& config, const std::filesystem::path& out_path, std::ostream& log);

/// Full command line (args[0] is the program name). Maps every failure onto
/// ExitCode; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edgeworth::cli
