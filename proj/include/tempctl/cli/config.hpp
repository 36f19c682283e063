#ifndef TEMPCTL_CLI_CONFIG_HPP_
#define TEMPCTL_CLI_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tempctl/hjb.hpp"
#include "tempctl/policy.hpp"
#include "tempctl/simulate.hpp"

namespace tempctl::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-algorithm section. Only the fields that matter for the algorithm are
// read or written.
struct AlgorithmSettings {
  double eta = 0.5;
  double beta = 0.0;   // constant
  double d = 1.0;      // power-law
  double b = 1.0;      // power-law
  double gamma = 1.0;  // replica-exchange

  friend bool operator==(const AlgorithmSettings&, const AlgorithmSettings&) = default;
};

// Everything a run needs. Default-constructed, this is the tuned preset:
// the four tuned algorithms on the double well, started at x = -3.
struct Config {
  // [run]
  std::string objective = "double-well";
  double x0 = -3.0;
  int n_steps = 500;
  int n_reps = 500;
  std::uint64_t seed = 1;
  bool common_noise = false;
  std::vector<PolicyKind> policies{PolicyKind::kConstant, PolicyKind::kPowerLaw,
                                   PolicyKind::kReplicaExchange, PolicyKind::kStateDependent};

  // [hjb]
  HjbParams hjb;
  std::optional<ShootingInit> init = ShootingInit{-0.2853, 1.1575};
  int pilot_steps = 200;
  int pilot_reps = 50;
  std::uint64_t pilot_seed = 1;

  // One section per algorithm name.
  std::map<PolicyKind, AlgorithmSettings> algorithms = default_algorithms();

  static std::map<PolicyKind, AlgorithmSettings> default_algorithms();

  friend bool operator==(const Config&, const Config&) = default;
};

Config paper_preset();

// INI text. Unknown sections or keys and malformed values throw ConfigError;
// omitted keys keep their preset value.
Config parse_config(std::istream& in);
Config parse_config_string(const std::string& text);
Config load_config(const std::filesystem::path& path);
// Doubles are written in shortest round-trip form, so parsing the result
// gives back an equal Config.
std::string serialize_config(const Config& config);

// Throws ConfigError.
void validate(const Config& config);

// Derived settings.
SimConfig sim_config(const Config& config, PolicyKind kind);
PilotConfig pilot_config(const Config& config);

}  // namespace tempctl::cli

#endif  // TEMPCTL_CLI_CONFIG_HPP_
