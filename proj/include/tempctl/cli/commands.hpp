#ifndef TEMPCTL_CLI_COMMANDS_HPP_
#define TEMPCTL_CLI_COMMANDS_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tempctl/cli/config.hpp"

namespace tempctl::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitSolverFailure = 3,
};

struct Comparison {
  // Present when some policy needed the HJB solution.
  std::optional<ShootingOutcome> hjb;
  std::vector<std::pair<PolicyKind, RunResult>> runs;
};

// Shooting with the configured init (or random draws), pilot and objective.
ShootingOutcome solve_hjb(const Config& config);

// Runs every policy in config.policies, solving the HJB at most once.
Comparison run_policies(const Config& config);

// Same, but insists on at least two policies (ConfigError otherwise).
Comparison compare(const Config& config);

// JSON manifest; `config_ini` inside it is enough to redo the run.
std::string make_manifest(const std::string& command, const Config& config,
                          const Comparison& result);
// Reads back the config stored by make_manifest.
Config config_from_manifest(const std::filesystem::path& path);

// Output files: compare.csv (only with two or more runs), <policy>.csv,
// manifest.json.
void write_comparison(const std::filesystem::path& dir, const std::string& command,
                      const Config& config, const Comparison& result);

// The tempctl command line. Returns an ExitCode.
int main(int argc, const char* const* argv);

}  // namespace tempctl::cli

#endif  // TEMPCTL_CLI_COMMANDS_HPP_
