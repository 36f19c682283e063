#include "tempctl/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "tempctl/random.hpp"

namespace tempctl {

namespace {

// Tag of the auxiliary stream that feeds u01 to sampled-relaxed policies.
constexpr std::uint64_t kAuxStreamTag = 0x5eed'a0c5'7e3d'0001ULL;

Policy build_policy(const SimConfig& config, const SolutionPtr& sol) {
  const auto& spec = config.policy;
  switch (spec.kind) {
    case PolicyKind::kConstant:
      return make_constant(spec.beta);
    case PolicyKind::kPowerLaw:
      return make_power_law(spec.d, spec.b);
    case PolicyKind::kReplicaExchange:
      // Unused; replica exchange has its own stepper.
      return ConstantTemperature{config.replica_gamma};
    default:
      if (!sol) {
        throw std::invalid_argument(std::string(policy_name(spec.kind)) +
                                    " policy requires an HJB solution");
      }
      return make_solution_policy(spec.kind, sol);
  }
}

std::vector<double> simulate_one(const SimConfig& config, const Objective1D& obj,
                                 const Policy& policy, int rep) {
  const auto kind = config.policy.kind;
  RandomStream noise(stream_key(config.seed, config.stream_tag, rep));
  RandomStream aux(stream_key(config.seed, config.stream_tag ^ kAuxStreamTag, rep));

  std::vector<double> values;
  values.reserve(config.n_steps);
  double x = config.x0;
  double y = config.x0;
  for (int k = 1; k <= config.n_steps; ++k) {
    if (!std::isfinite(x) || !std::isfinite(y)) return {};
    const double fx = obj.eval(x);
    if (!std::isfinite(fx)) return {};
    values.push_back(fx);
    if (k == config.n_steps) break;

    const long step_index = k - 1;
    const double xi = noise.normal();
    switch (kind) {
      case PolicyKind::kReplicaExchange:
        std::tie(x, y) = replica_step(x, y, obj, config.eta, config.replica_gamma, xi);
        break;
      case PolicyKind::kStateDependent: {
        const auto& sd = std::get<StateDependentTemperature>(policy);
        x = state_dependent_step(x, obj.grad(x), config.eta, eval_h(*sd.sol, x), xi);
        break;
      }
      case PolicyKind::kSampledRelaxed: {
        const double u01 = aux.uniform();
        x = langevin_step(x, obj.grad(x), config.eta,
                          temperature(policy, step_index, x, u01), xi);
        break;
      }
      default:
        x = langevin_step(x, obj.grad(x), config.eta, temperature(policy, step_index, x),
                          xi);
        break;
    }
  }
  return values;
}

IterStats aggregate(int k, const std::vector<std::vector<double>>& paths) {
  IterStats s;
  s.k = k;
  const std::size_t idx = static_cast<std::size_t>(k - 1);
  std::size_t n = 0;
  double sum = 0.0;
  s.min_f = std::numeric_limits<double>::infinity();
  s.max_f = -std::numeric_limits<double>::infinity();
  for (const auto& p : paths) {
    if (p.empty()) continue;
    ++n;
    sum += p[idx];
    s.min_f = std::min(s.min_f, p[idx]);
    s.max_f = std::max(s.max_f, p[idx]);
  }
  if (n == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return IterStats{k, nan, nan, nan, nan};
  }
  if (s.min_f == s.max_f) {
    s.mean_f = s.min_f;
    s.std_err = 0.0;
    return s;
  }
  s.mean_f = std::clamp(sum / static_cast<double>(n), s.min_f, s.max_f);
  double ss = 0.0;
  for (const auto& p : paths) {
    if (p.empty()) continue;
    const double d = p[idx] - s.mean_f;
    ss += d * d;
  }
  s.std_err = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n))
                    : 0.0;
  return s;
}

}  // namespace

double state_dependent_step(double x, double grad, double eta, double h, double xi) {
  return x - eta * grad + std::sqrt(eta) * h * xi;
}

double langevin_step(double x, double grad, double eta, double beta, double xi) {
  return state_dependent_step(x, grad, eta, std::sqrt(2.0 * beta), xi);
}

std::pair<double, double> replica_step(double xg, double yl, const Objective1D& obj,
                                       double eta, double gamma, double xi) {
  const double gd = xg - eta * obj.grad(xg);
  const double ld = langevin_step(yl, obj.grad(yl), eta, gamma, xi);
  if (obj.eval(gd) > obj.eval(ld)) return {ld, gd};
  return {gd, ld};
}

void SimConfig::validate() const {
  if (!(eta > 0.0 && std::isfinite(eta))) {
    throw std::invalid_argument("step size eta must be positive");
  }
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (n_reps < 1) throw std::invalid_argument("n_reps must be >= 1");
  if (!std::isfinite(x0)) throw std::invalid_argument("x0 must be finite");
  if (policy.kind == PolicyKind::kReplicaExchange &&
      !(replica_gamma >= 0.0 && std::isfinite(replica_gamma))) {
    throw std::invalid_argument("replica temperature gamma must be >= 0");
  }
}

std::vector<double> run_replication(const SimConfig& config, const Objective1D& obj,
                                    const SolutionPtr& sol, int rep) {
  config.validate();
  return simulate_one(config, obj, build_policy(config, sol), rep);
}

RunResult run(const SimConfig& config, const Objective1D& obj, SolutionPtr sol) {
  config.validate();
  const Policy policy = build_policy(config, sol);

  std::vector<std::vector<double>> paths(static_cast<std::size_t>(config.n_reps));
  const unsigned workers = std::clamp<unsigned>(std::thread::hardware_concurrency(), 1u,
                                                static_cast<unsigned>(config.n_reps));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int r = static_cast<int>(w); r < config.n_reps;
               r += static_cast<int>(workers)) {
            paths[static_cast<std::size_t>(r)] = simulate_one(config, obj, policy, r);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  RunResult result;
  result.excluded = static_cast<int>(
      std::count_if(paths.begin(), paths.end(), [](const auto& p) { return p.empty(); }));
  result.stats.reserve(static_cast<std::size_t>(config.n_steps));
  for (int k = 1; k <= config.n_steps; ++k) result.stats.push_back(aggregate(k, paths));
  return result;
}

RunResult run(const SimConfig& config, SolutionPtr sol) {
  return run(config, ObjectiveRegistry::instance().make(config.objective), std::move(sol));
}

}  // namespace tempctl
