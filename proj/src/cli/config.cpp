#include "tempctl/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tempctl::cli {

namespace pt = boost::property_tree;

namespace {

const std::vector<PolicyKind> kAllKinds{
    PolicyKind::kConstant,       PolicyKind::kPowerLaw,       PolicyKind::kBangBang,
    PolicyKind::kStateDependent, PolicyKind::kSampledRelaxed, PolicyKind::kReplicaExchange,
};

// Shortest text that parses back to the same double.
std::string exact(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

template <class T>
T parse_number(const std::string& text, const std::string& where) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError(where + ": cannot parse '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(where + ": expected true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

// Keys each algorithm section accepts, besides eta.
std::vector<std::string> extra_keys(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kConstant: return {"beta"};
    case PolicyKind::kPowerLaw: return {"d", "b"};
    case PolicyKind::kReplicaExchange: return {"gamma"};
    default: return {};
  }
}

double& field(AlgorithmSettings& s, const std::string& key) {
  if (key == "eta") return s.eta;
  if (key == "beta") return s.beta;
  if (key == "d") return s.d;
  if (key == "b") return s.b;
  return s.gamma;
}

void read_run(const pt::ptree& sec, Config& c) {
  for (const auto& [key, node] : sec) {
    const std::string v = node.get_value<std::string>();
    const std::string where = "[run] " + key;
    if (key == "objective") c.objective = v;
    else if (key == "x0") c.x0 = parse_number<double>(v, where);
    else if (key == "steps") c.n_steps = parse_number<int>(v, where);
    else if (key == "reps") c.n_reps = parse_number<int>(v, where);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(v, where);
    else if (key == "common_noise") c.common_noise = parse_bool(v, where);
    else if (key == "policies") {
      c.policies.clear();
      for (const auto& name : split_list(v)) {
        try {
          c.policies.push_back(parse_policy_kind(name));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(where + ": " + e.what());
        }
      }
    } else {
      throw ConfigError("unknown key " + where);
    }
  }
}

void read_hjb(const pt::ptree& sec, Config& c) {
  double lo = c.hjb.range.lo();
  double hi = c.hjb.range.hi();
  auto& h = c.hjb;
  for (const auto& [key, node] : sec) {
    const std::string v = node.get_value<std::string>();
    const std::string where = "[hjb] " + key;
    if (key == "rho") h.rho = parse_number<double>(v, where);
    else if (key == "lambda") h.lambda = parse_number<double>(v, where);
    else if (key == "temp_lo") lo = parse_number<double>(v, where);
    else if (key == "temp_hi") hi = parse_number<double>(v, where);
    else if (key == "x_min") h.x_min = parse_number<double>(v, where);
    else if (key == "x_max") h.x_max = parse_number<double>(v, where);
    else if (key == "core_min") h.core_min = parse_number<double>(v, where);
    else if (key == "core_max") h.core_max = parse_number<double>(v, where);
    else if (key == "step") h.step = parse_number<double>(v, where);
    else if (key == "n_inits") h.n_inits = parse_number<int>(v, where);
    else if (key == "init_seed") h.init_seed = parse_number<std::uint64_t>(v, where);
    else if (key == "blowup_threshold") h.blowup_threshold = parse_number<double>(v, where);
    else if (key == "pilot_steps") c.pilot_steps = parse_number<int>(v, where);
    else if (key == "pilot_reps") c.pilot_reps = parse_number<int>(v, where);
    else if (key == "pilot_seed") c.pilot_seed = parse_number<std::uint64_t>(v, where);
    else if (key == "init") {
      if (v == "random") {
        c.init.reset();
      } else {
        const auto parts = split_list(v);
        if (parts.size() != 2) throw ConfigError(where + ": expected 'v, vx' or 'random'");
        c.init = ShootingInit{parse_number<double>(parts[0], where),
                              parse_number<double>(parts[1], where)};
      }
    } else {
      throw ConfigError("unknown key " + where);
    }
  }
  try {
    h.range = TemperatureRange(lo, hi);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[hjb] temperature range: ") + e.what());
  }
}

void read_algorithm(const std::string& name, const pt::ptree& sec, PolicyKind kind,
                    AlgorithmSettings& s) {
  const auto extra = extra_keys(kind);
  for (const auto& [key, node] : sec) {
    const std::string where = "[" + name + "] " + key;
    if (key != "eta" && std::find(extra.begin(), extra.end(), key) == extra.end()) {
      throw ConfigError("unknown key " + where);
    }
    field(s, key) = parse_number<double>(node.get_value<std::string>(), where);
  }
}

}  // namespace

std::map<PolicyKind, AlgorithmSettings> Config::default_algorithms() {
  std::map<PolicyKind, AlgorithmSettings> m;
  for (auto kind : kAllKinds) m[kind] = AlgorithmSettings{};
  m[PolicyKind::kConstant].beta = 500.0 / 1024.0;
  m[PolicyKind::kPowerLaw].d = 500.0 / 16.0;
  m[PolicyKind::kPowerLaw].b = 0.9;
  m[PolicyKind::kReplicaExchange].gamma = 250.0;
  m[PolicyKind::kStateDependent].eta = 0.125;
  m[PolicyKind::kSampledRelaxed].eta = 0.125;
  m[PolicyKind::kBangBang].eta = 0.125;
  return m;
}

Config paper_preset() { return Config{}; }

Config parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  Config c;
  for (const auto& [name, sec] : tree) {
    if (sec.empty() && !sec.data().empty()) {
      throw ConfigError("key '" + name + "' outside of any section");
    }
    if (name == "run") {
      read_run(sec, c);
    } else if (name == "hjb") {
      read_hjb(sec, c);
    } else {
      PolicyKind kind;
      try {
        kind = parse_policy_kind(name);
      } catch (const std::invalid_argument&) {
        throw ConfigError("unknown section [" + name + "]");
      }
      read_algorithm(name, sec, kind, c.algorithms[kind]);
    }
  }
  return c;
}

Config parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

std::string serialize_config(const Config& c) {
  std::ostringstream out;
  out << "[run]\n"
      << "objective = " << c.objective << '\n'
      << "x0 = " << exact(c.x0) << '\n'
      << "steps = " << c.n_steps << '\n'
      << "reps = " << c.n_reps << '\n'
      << "seed = " << c.seed << '\n'
      << "common_noise = " << (c.common_noise ? "true" : "false") << '\n'
      << "policies = ";
  for (std::size_t i = 0; i < c.policies.size(); ++i) {
    out << (i ? ", " : "") << policy_name(c.policies[i]);
  }
  const auto& h = c.hjb;
  out << "\n\n[hjb]\n"
      << "rho = " << exact(h.rho) << '\n'
      << "lambda = " << exact(h.lambda) << '\n'
      << "temp_lo = " << exact(h.range.lo()) << '\n'
      << "temp_hi = " << exact(h.range.hi()) << '\n'
      << "x_min = " << exact(h.x_min) << '\n'
      << "x_max = " << exact(h.x_max) << '\n'
      << "core_min = " << exact(h.core_min) << '\n'
      << "core_max = " << exact(h.core_max) << '\n'
      << "step = " << exact(h.step) << '\n'
      << "blowup_threshold = " << exact(h.blowup_threshold) << '\n'
      << "init = "
      << (c.init ? exact(c.init->v) + ", " + exact(c.init->vx) : std::string("random")) << '\n'
      << "n_inits = " << h.n_inits << '\n'
      << "init_seed = " << h.init_seed << '\n'
      << "pilot_steps = " << c.pilot_steps << '\n'
      << "pilot_reps = " << c.pilot_reps << '\n'
      << "pilot_seed = " << c.pilot_seed << '\n';
  for (auto kind : kAllKinds) {
    const auto it = c.algorithms.find(kind);
    if (it == c.algorithms.end()) continue;
    AlgorithmSettings s = it->second;
    out << "\n[" << policy_name(kind) << "]\n"
        << "eta = " << exact(s.eta) << '\n';
    for (const auto& key : extra_keys(kind)) out << key << " = " << exact(field(s, key)) << '\n';
  }
  return out.str();
}

void validate(const Config& c) {
  try {
    c.hjb.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[hjb] ") + e.what());
  }
  if (!ObjectiveRegistry::instance().contains(c.objective)) {
    throw ConfigError("unknown objective '" + c.objective + "'");
  }
  if (c.policies.empty()) throw ConfigError("[run] policies is empty");
  std::set<PolicyKind> seen;
  for (auto kind : c.policies) {
    if (!seen.insert(kind).second) {
      throw ConfigError("[run] policy '" + std::string(policy_name(kind)) + "' listed twice");
    }
  }
  if (c.pilot_steps < 1 || c.pilot_reps < 1) {
    throw ConfigError("[hjb] pilot_steps and pilot_reps must be >= 1");
  }
  for (auto kind : kAllKinds) {
    const std::string where = "[" + std::string(policy_name(kind)) + "] ";
    try {
      sim_config(c, kind).validate();
      const auto& s = c.algorithms.at(kind);
      if (kind == PolicyKind::kConstant) make_constant(s.beta, c.hjb.range);
      if (kind == PolicyKind::kPowerLaw) make_power_law(s.d, s.b);
      if (kind == PolicyKind::kReplicaExchange && !(s.gamma > 0.0 && std::isfinite(s.gamma))) {
        throw std::invalid_argument("gamma must be positive");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + e.what());
    } catch (const std::out_of_range&) {
      throw ConfigError(where + "missing section");
    }
  }
}

SimConfig sim_config(const Config& c, PolicyKind kind) {
  const auto& s = c.algorithms.at(kind);
  SimConfig sc;
  sc.eta = s.eta;
  sc.n_steps = c.n_steps;
  sc.n_reps = c.n_reps;
  sc.x0 = c.x0;
  sc.seed = c.seed;
  sc.objective = c.objective;
  sc.policy = PolicySpec{kind, s.beta, s.d, s.b};
  sc.replica_gamma = s.gamma;
  // Independent noise per algorithm unless common random numbers are asked for.
  sc.stream_tag = c.common_noise ? 0 : static_cast<std::uint64_t>(kind) + 1;
  return sc;
}

PilotConfig pilot_config(const Config& c) {
  PilotConfig p;
  p.eta = c.algorithms.at(PolicyKind::kStateDependent).eta;
  p.n_steps = c.pilot_steps;
  p.n_reps = c.pilot_reps;
  p.x0 = c.x0;
  p.seed = c.pilot_seed;
  return p;
}

}  // namespace tempctl::cli
