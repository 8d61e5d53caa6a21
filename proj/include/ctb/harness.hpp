#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ctb::cli {

/// Exit codes: 0 = ran, 2 = validation error, 3 = infeasible parameters.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json report;
};

/// Parses and runs one subcommand invocation (args exclude the binary
/// name). Never throws: failures come back as a nonzero exit code with an
/// "error" report. Sweep cells re-enter through this same function.
CommandResult run_command(const std::vector<std::string>& args);

/// The main() body of the CLI: runs the command, prints the report (or
/// writes it when --out was given), returns the exit code.
int main_entry(int argc, char** argv);

}  // namespace ctb::cli
