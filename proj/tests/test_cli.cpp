#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "tempctl/cli/commands.hpp"
#include "tempctl/cli/io.hpp"

using namespace tempctl;
using namespace tempctl::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tempctl_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tempctl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

// Small but non-trivial settings for end-to-end runs.
std::vector<std::string> quick(std::vector<std::string> args) {
  for (const char* a : {"--steps", "40", "--reps", "16"}) args.emplace_back(a);
  return args;
}

}  // namespace

TEST_CASE("bundled preset file matches the built-in preset") {
  const auto c = load_config(fs::path(TEMPCTL_SOURCE_DIR) / "configs" / "paper-preset.ini");
  CHECK(c == paper_preset());
  CHECK(c.algorithms.at(PolicyKind::kConstant).beta == doctest::Approx(0.4883).epsilon(1e-4));
  CHECK(c.algorithms.at(PolicyKind::kPowerLaw).d == 31.25);
  CHECK(c.algorithms.at(PolicyKind::kReplicaExchange).gamma == 250.0);
  CHECK(c.algorithms.at(PolicyKind::kStateDependent).eta == 0.125);
  CHECK(c.hjb.lambda == 0.3125);
  CHECK(c.hjb.rho == 1.25);
  CHECK(c.init == ShootingInit{-0.2853, 1.1575});
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("config round trip") {
  SUBCASE("preset") {
    const auto c = paper_preset();
    CHECK(parse_config_string(serialize_config(c)) == c);
  }
  SUBCASE("awkward values") {
    Config c;
    c.x0 = 0.1 + 0.2;
    c.seed = 18446744073709551615ULL;
    c.common_noise = true;
    c.policies = {PolicyKind::kSampledRelaxed, PolicyKind::kBangBang};
    c.hjb.range = TemperatureRange(1.0 / 3.0, 2e5);
    c.hjb.lambda = 1e-7;
    c.init.reset();
    c.algorithms[PolicyKind::kPowerLaw].b = 2.0 / 3.0;
    const auto once = parse_config_string(serialize_config(c));
    CHECK(once == c);
    CHECK(serialize_config(once) == serialize_config(c));
  }
  SUBCASE("omitted keys keep preset values") {
    const auto c = parse_config_string("[run]\nsteps = 7\n[constant]\nbeta = 1.5\n");
    CHECK(c.n_steps == 7);
    CHECK(c.algorithms.at(PolicyKind::kConstant).beta == 1.5);
    CHECK(c.n_reps == 500);
  }
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config_string("[run]\nstepz = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[annealing]\neta = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[run]\nsteps = 3.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[run]\nx0 = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[run]\npolicies = constant, nope\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[constant]\ngamma = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[hjb]\ntemp_lo = 5\ntemp_hi = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[hjb]\ninit = 1\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/tempctl.ini"), ConfigError);

  Config c;
  c.policies = {PolicyKind::kConstant, PolicyKind::kConstant};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = Config{};
  c.algorithms[PolicyKind::kConstant].beta = 900.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = Config{};
  c.objective = "rosenbrock";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = Config{};
  c.n_reps = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = Config{};
  c.policies = {PolicyKind::kConstant};
  CHECK_THROWS_AS(compare(c), ConfigError);
}

TEST_CASE("derived simulation settings") {
  Config c;
  const auto sd = sim_config(c, PolicyKind::kStateDependent);
  CHECK(sd.eta == 0.125);
  CHECK(sd.x0 == -3.0);
  const auto re = sim_config(c, PolicyKind::kReplicaExchange);
  CHECK(re.replica_gamma == 250.0);
  CHECK(sd.stream_tag != re.stream_tag);
  c.common_noise = true;
  CHECK(sim_config(c, PolicyKind::kStateDependent).stream_tag ==
        sim_config(c, PolicyKind::kReplicaExchange).stream_tag);
  CHECK(pilot_config(c).eta == 0.125);
}

TEST_CASE("csv formatting") {
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1e-20) == "1e-20");

  RunResult r;
  r.stats = {{1, 2.0, 0.0, 2.0, 2.0}, {2, 1.5, 0.25, 0.5, 3.0}};
  std::ostringstream a;
  write_stats_csv(a, r);
  CHECK(a.str() == "k,mean_f,std_err,min_f,max_f\n1,2,0,2,2\n2,1.5,0.25,0.5,3\n");

  std::ostringstream w;
  write_wide_csv(w, {{"constant", r}, {"power-law", r}});
  CHECK(w.str() ==
        "k,constant_mean_f,constant_std_err,power-law_mean_f,power-law_std_err\n"
        "1,2,0,2,0\n2,1.5,0.25,1.5,0.25\n");
}

TEST_CASE("temperature profile") {
  auto sol = std::get<HjbSolution>(integrate(double_well(), HjbParams{}, {-0.2853, 1.1575}));
  const auto& r = sol.params.range;

  std::ostringstream one;
  write_profile_csv(one, sol, 4.0, 4.0, 1);
  std::istringstream in(one.str());
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "x,v,vxx,h,temperature");
  CHECK(row.rfind("4,", 0) == 0);
  CHECK_FALSE(std::getline(in, extra));

  std::ostringstream grid;
  write_profile_csv(grid, sol, -8.0, 8.0, 321);
  std::istringstream g(grid.str());
  std::getline(g, header);
  int rows = 0;
  while (std::getline(g, row)) {
    ++rows;
    const double x = std::stod(row.substr(0, row.find(',')));
    const double t = std::stod(row.substr(row.rfind(',') + 1));
    REQUIRE(t > r.lo());
    REQUIRE(t < r.hi());
    if (x >= 3.5 && x <= 4.5) CHECK(t < 1.0);
  }
  CHECK(rows == 321);
  CHECK_THROWS_AS(write_profile_csv(grid, sol, 0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("command line") {
  SUBCASE("usage errors exit with 2") {
    const auto dir = scratch_dir("usage");
    CHECK(run_cli({}) == kExitConfigError);
    CHECK(run_cli({"compare", "--bogus"}) == kExitConfigError);
    CHECK(run_cli({"compare", "--policies", "constant", "--out", dir.string()}) ==
          kExitConfigError);
    CHECK(run_cli({"run", "--out", dir.string()}) == kExitConfigError);
    CHECK(run_cli({"run", "--policy", "constant", "--config", "/nonexistent.ini"}) ==
          kExitConfigError);
    CHECK(run_cli({"run", "--policy", "constant", "--temp-lo", "9", "--temp-hi", "1"}) ==
          kExitConfigError);
    CHECK(run_cli({"solve-hjb", "--init-v", "1"}) == kExitConfigError);
    CHECK_FALSE(fs::exists(dir / "manifest.json"));
  }

  SUBCASE("solver failure exits with 3") {
    const auto dir = scratch_dir("solver");
    CHECK(run_cli({"solve-hjb", "--init-v", "1e9", "--init-vx", "0", "--out", dir.string()}) ==
          kExitSolverFailure);
  }

  SUBCASE("compare writes per-algorithm and wide csv files") {
    const auto dir = scratch_dir("compare");
    REQUIRE(run_cli(quick({"compare", "--out", dir.string()})) == kExitOk);
    for (const char* f : {"compare.csv", "constant.csv", "power-law.csv",
                          "replica-exchange.csv", "state-dependent.csv", "manifest.json"}) {
      CHECK(fs::exists(dir / f));
    }
    const auto wide = read_text_file(dir / "compare.csv");
    CHECK(wide.rfind("k,constant_mean_f,constant_std_err,power-law_mean_f", 0) == 0);
    const auto manifest = read_text_file(dir / "manifest.json");
    CHECK(manifest.find("\"pilot_score\"") != std::string::npos);
    CHECK(manifest.find("\"excluded\"") != std::string::npos);
    CHECK(manifest.find("\"version\"") != std::string::npos);
  }

  SUBCASE("manifest re-run reproduces every csv byte for byte") {
    const auto a = scratch_dir("rerun_a");
    const auto b = scratch_dir("rerun_b");
    REQUIRE(run_cli(quick({"compare", "--seed", "42", "--x0", "-2.5", "--out", a.string()})) ==
            kExitOk);
    REQUIRE(run_cli({"compare", "--manifest", (a / "manifest.json").string(), "--out",
                     b.string()}) == kExitOk);
    const auto c = config_from_manifest(a / "manifest.json");
    CHECK(c.seed == 42);
    CHECK(c.x0 == -2.5);
    CHECK(c.n_reps == 16);
    for (const char* f : {"compare.csv", "constant.csv", "state-dependent.csv"}) {
      CHECK(read_text_file(a / f) == read_text_file(b / f));
    }
  }

  SUBCASE("common noise and overrides") {
    const auto dir = scratch_dir("common");
    REQUIRE(run_cli(quick({"compare", "--policies", "constant,power-law", "--common-noise",
                           "--eta", "0.25", "--out", dir.string()})) == kExitOk);
    const auto c = config_from_manifest(dir / "manifest.json");
    CHECK(c.common_noise);
    CHECK(c.policies == std::vector<PolicyKind>{PolicyKind::kConstant, PolicyKind::kPowerLaw});
    CHECK(c.algorithms.at(PolicyKind::kPowerLaw).eta == 0.25);
    CHECK_FALSE(fs::exists(dir / "state-dependent.csv"));
  }

  SUBCASE("run, solve-hjb and temp-profile") {
    const auto dir = scratch_dir("single");
    REQUIRE(run_cli(quick({"run", "--policy", "sampled-relaxed", "--out", dir.string()})) ==
            kExitOk);
    CHECK(fs::exists(dir / "sampled-relaxed.csv"));
    CHECK_FALSE(fs::exists(dir / "compare.csv"));

    REQUIRE(run_cli({"solve-hjb", "--out", dir.string()}) == kExitOk);
    const auto sol = read_text_file(dir / "solution.csv");
    CHECK(sol.rfind("x,v,vx,vxx,h,temperature\n", 0) == 0);

    REQUIRE(run_cli({"temp-profile", "--grid-lo", "-3", "--grid-hi", "-3", "--grid-n", "1",
                     "--out", dir.string()}) == kExitOk);
    const auto prof = read_text_file(dir / "profile.csv");
    CHECK(std::count(prof.begin(), prof.end(), '\n') == 2);
  }
}
