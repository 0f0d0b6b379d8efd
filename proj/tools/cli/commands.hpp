#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace rushlarsen::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitOverflow = 3,
  kExitIo = 4,
};

/// trajectory.csv: t,y_1..y_N. Returns kExitOverflow if the run was cut short.
int cmd_solve(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);

/// grid_<scheme>_theta_<theta>.csv per (scheme, theta), plus crossings.csv.
int cmd_stability(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);

/// convergence.csv and reference.csv.
int cmd_converge(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);

/// critical_dt.csv.
int cmd_critical_dt(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// Parses argv, runs the subcommand and maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& log);

}  // namespace rushlarsen::cli
