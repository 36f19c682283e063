#include "tempctl/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <iostream>
#include <memory>
#include <sstream>

#include "tempctl/cli/io.hpp"

namespace tempctl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

// JSON has no infinity; unscored candidates become null.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_json(const Config& c) {
  json j;
  j["run"] = {{"objective", c.objective}, {"x0", c.x0},         {"steps", c.n_steps},
              {"reps", c.n_reps},         {"seed", c.seed},     {"common_noise", c.common_noise}};
  j["run"]["policies"] = json::array();
  for (auto k : c.policies) j["run"]["policies"].push_back(policy_name(k));
  const auto& h = c.hjb;
  j["hjb"] = {{"rho", h.rho},
              {"lambda", h.lambda},
              {"temp_lo", h.range.lo()},
              {"temp_hi", h.range.hi()},
              {"x_min", h.x_min},
              {"x_max", h.x_max},
              {"core_min", h.core_min},
              {"core_max", h.core_max},
              {"step", h.step},
              {"blowup_threshold", h.blowup_threshold},
              {"n_inits", h.n_inits},
              {"init_seed", h.init_seed},
              {"pilot_steps", c.pilot_steps},
              {"pilot_reps", c.pilot_reps},
              {"pilot_seed", c.pilot_seed}};
  j["hjb"]["init"] = c.init ? json::array({c.init->v, c.init->vx}) : json("random");
  for (const auto& [kind, s] : c.algorithms) {
    auto& a = j["algorithms"][std::string(policy_name(kind))];
    a["eta"] = s.eta;
    if (kind == PolicyKind::kConstant) a["beta"] = s.beta;
    if (kind == PolicyKind::kPowerLaw) {
      a["d"] = s.d;
      a["b"] = s.b;
    }
    if (kind == PolicyKind::kReplicaExchange) a["gamma"] = s.gamma;
  }
  return j;
}

json hjb_json(const ShootingOutcome& out) {
  const auto& sol = out.solution;
  json j = {{"init", {sol.init.v, sol.init.vx}},
            {"pilot_score", finite_or_null(sol.pilot_score)},
            {"chosen", out.chosen},
            {"span", {sol.x_lo(), sol.x_hi()}},
            {"left_blowup", optional_number(sol.left_blowup)},
            {"right_blowup", optional_number(sol.right_blowup)}};
  j["candidates"] = json::array();
  for (const auto& c : out.candidates) {
    j["candidates"].push_back({{"init", {c.init.v, c.init.vx}},
                               {"survived", c.survived},
                               {"left_blowup", optional_number(c.left_blowup)},
                               {"right_blowup", optional_number(c.right_blowup)},
                               {"core_blowup", optional_number(c.core_blowup)},
                               {"pilot_score", finite_or_null(c.pilot_score)}});
  }
  return j;
}

std::string csv_of(const RunResult& r) {
  std::ostringstream out;
  write_stats_csv(out, r);
  return out.str();
}

// ---------------------------------------------------------------------------
// Command line

struct Options {
  std::optional<std::string> config_path;
  std::optional<std::string> manifest_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> objective;
  std::optional<double> eta, rho, lambda, temp_lo, temp_hi, x0;
  std::optional<int> steps, reps, n_inits;
  std::optional<double> init_v, init_vx;
  bool random_init = false;
  bool common_noise = false;
  std::optional<std::string> policy;
  std::vector<std::string> policies;
  double grid_lo = -8.0;
  double grid_hi = 8.0;
  int grid_n = 1601;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "INI configuration (default: built-in preset)");
  cmd->add_option("--manifest", o.manifest_path, "re-run the configuration stored in a manifest");
  cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", o.seed, "simulation seed");
  cmd->add_option("--objective", o.objective, "objective name");
  cmd->add_option("--eta", o.eta, "step size, applied to every algorithm");
  cmd->add_option("--rho", o.rho, "discount rate");
  cmd->add_option("--lambda", o.lambda, "entropy weight");
  cmd->add_option("--temp-lo", o.temp_lo, "lowest temperature");
  cmd->add_option("--temp-hi", o.temp_hi, "highest temperature");
  cmd->add_option("--steps", o.steps, "iterations per replication");
  cmd->add_option("--reps", o.reps, "replications");
  cmd->add_option("--x0", o.x0, "initial point");
  cmd->add_option("--n-inits", o.n_inits, "random shooting candidates");
  cmd->add_option("--init-v", o.init_v, "shooting value v(0)");
  cmd->add_option("--init-vx", o.init_vx, "shooting slope v'(0)");
  cmd->add_flag("--random-init", o.random_init, "ignore the configured init and draw candidates");
  cmd->add_flag("--common-noise", o.common_noise, "share Gaussian draws across algorithms");
  cmd->get_option("--config")->excludes(cmd->get_option("--manifest"));
  cmd->get_option("--init-v")->needs(cmd->get_option("--init-vx"));
  cmd->get_option("--init-vx")->needs(cmd->get_option("--init-v"));
  cmd->get_option("--random-init")->excludes(cmd->get_option("--init-v"));
}

Config resolve_config(const Options& o) {
  Config c = o.manifest_path  ? config_from_manifest(*o.manifest_path)
             : o.config_path ? load_config(*o.config_path)
                             : paper_preset();
  if (o.seed) c.seed = *o.seed;
  if (o.objective) c.objective = *o.objective;
  if (o.eta) {
    for (auto& [kind, s] : c.algorithms) s.eta = *o.eta;
  }
  if (o.rho) c.hjb.rho = *o.rho;
  if (o.lambda) c.hjb.lambda = *o.lambda;
  if (o.temp_lo || o.temp_hi) {
    try {
      c.hjb.range = TemperatureRange(o.temp_lo.value_or(c.hjb.range.lo()),
                                     o.temp_hi.value_or(c.hjb.range.hi()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("temperature range: ") + e.what());
    }
  }
  if (o.steps) c.n_steps = *o.steps;
  if (o.reps) c.n_reps = *o.reps;
  if (o.x0) c.x0 = *o.x0;
  if (o.n_inits) c.hjb.n_inits = *o.n_inits;
  if (o.init_v) c.init = ShootingInit{*o.init_v, *o.init_vx};
  if (o.random_init) c.init.reset();
  if (o.common_noise) c.common_noise = true;
  try {
    if (o.policy) c.policies = {parse_policy_kind(*o.policy)};
    if (!o.policies.empty()) {
      c.policies.clear();
      for (const auto& name : o.policies) c.policies.push_back(parse_policy_kind(name));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  validate(c);
  return c;
}

void write_hjb_outputs(const fs::path& dir, const std::string& command, const Config& c,
                       const ShootingOutcome& out, const Options& o) {
  std::ostringstream csv;
  std::string file;
  if (command == "temp-profile") {
    write_profile_csv(csv, out.solution, o.grid_lo, o.grid_hi, o.grid_n);
    file = "profile.csv";
  } else {
    write_solution_csv(csv, out.solution);
    file = "solution.csv";
  }
  write_text_file(dir / file, csv.str());
  Comparison result;
  result.hjb = out;
  write_text_file(dir / "manifest.json", make_manifest(command, c, result));
  std::cout << "wrote " << (dir / file).string() << '\n';
}

int dispatch(const std::string& command, const Options& o) {
  Config c = resolve_config(o);
  const fs::path dir = o.out_dir;
  if (command == "solve-hjb" || command == "temp-profile") {
    if (o.grid_n < 1 || !(o.grid_lo <= o.grid_hi)) {
      throw ConfigError("grid needs --grid-n >= 1 and --grid-lo <= --grid-hi");
    }
    write_hjb_outputs(dir, command, c, solve_hjb(c), o);
    return kExitOk;
  }
  if (command == "run" && c.policies.size() != 1) {
    throw ConfigError("run takes exactly one policy; pick one with --policy");
  }
  const Comparison result = command == "compare" ? compare(c) : run_policies(c);
  write_comparison(dir, command, c, result);
  for (const auto& [kind, r] : result.runs) {
    const auto& last = r.stats.back();
    std::cout << policy_name(kind) << ": mean f at k=" << last.k << " is "
              << format_number(last.mean_f) << " (" << r.excluded << " excluded)\n";
  }
  std::cout << "wrote " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

ShootingOutcome solve_hjb(const Config& config) {
  const auto obj = ObjectiveRegistry::instance().make(config.objective);
  return solve_shooting(obj, config.hjb, pilot_config(config), config.init);
}

Comparison run_policies(const Config& config) {
  validate(config);
  Comparison result;
  SolutionPtr sol;
  for (auto kind : config.policies) {
    if (needs_solution(kind) && !sol) {
      result.hjb = solve_hjb(config);
      sol = std::make_shared<const HjbSolution>(result.hjb->solution);
    }
  }
  for (auto kind : config.policies) {
    result.runs.emplace_back(kind, run(sim_config(config, kind), sol));
  }
  return result;
}

Comparison compare(const Config& config) {
  if (config.policies.size() < 2) {
    throw ConfigError("compare needs at least two policies");
  }
  return run_policies(config);
}

std::string make_manifest(const std::string& command, const Config& config,
                          const Comparison& result) {
  json j;
  j["tool"] = "tempctl";
  j["version"] = TEMPCTL_VERSION;
  j["command"] = command;
  j["created_utc"] = utc_now();
  j["config"] = config_json(config);
  j["config_ini"] = serialize_config(config);
  j["seeds"] = {{"run", config.seed},
                {"hjb_init", config.hjb.init_seed},
                {"pilot", config.pilot_seed}};
  for (auto kind : config.policies) {
    j["seeds"]["stream_tags"][std::string(policy_name(kind))] =
        sim_config(config, kind).stream_tag;
  }
  j["hjb"] = result.hjb ? hjb_json(*result.hjb) : json(nullptr);
  j["runs"] = json::array();
  for (const auto& [kind, r] : result.runs) {
    const std::string name(policy_name(kind));
    j["runs"].push_back({{"policy", name},
                         {"csv", name + ".csv"},
                         {"excluded", r.excluded},
                         {"final_mean_f", finite_or_null(r.stats.back().mean_f)}});
  }
  return j.dump(2) + "\n";
}

Config config_from_manifest(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
    return parse_config_string(j.at("config_ini").get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError("bad manifest " + path.string() + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
}

void write_comparison(const fs::path& dir, const std::string& command, const Config& config,
                      const Comparison& result) {
  std::vector<std::pair<std::string, RunResult>> named;
  for (const auto& [kind, r] : result.runs) {
    named.emplace_back(std::string(policy_name(kind)), r);
    write_text_file(dir / (named.back().first + ".csv"), csv_of(r));
  }
  if (named.size() >= 2) {
    std::ostringstream wide;
    write_wide_csv(wide, named);
    write_text_file(dir / "compare.csv", wide.str());
  }
  write_text_file(dir / "manifest.json", make_manifest(command, config, result));
}

int main(int argc, const char* const* argv) {
  CLI::App app{"Temperature control for Langevin global optimization"};
  app.set_version_flag("--version", std::string(TEMPCTL_VERSION));
  app.require_subcommand(1);

  Options o;
  auto* solve_cmd = app.add_subcommand("solve-hjb", "solve the HJB equation by shooting");
  auto* run_cmd = app.add_subcommand("run", "simulate one algorithm");
  auto* compare_cmd = app.add_subcommand("compare", "simulate several algorithms side by side");
  auto* profile_cmd = app.add_subcommand("temp-profile", "tabulate v, v'' and h on a grid");
  for (auto* cmd : {solve_cmd, run_cmd, compare_cmd, profile_cmd}) add_common(cmd, o);
  run_cmd->add_option("--policy", o.policy, "policy name");
  compare_cmd->add_option("--policies", o.policies, "comma-separated policy names")
      ->delimiter(',');
  profile_cmd->add_option("--grid-lo", o.grid_lo, "first grid point")->capture_default_str();
  profile_cmd->add_option("--grid-hi", o.grid_hi, "last grid point")->capture_default_str();
  profile_cmd->add_option("--grid-n", o.grid_n, "number of grid points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return dispatch(command, o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const NoSurvivingSolution& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const RootSolveError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace tempctl::cli
