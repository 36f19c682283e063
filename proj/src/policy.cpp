#include "tempctl/policy.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace tempctl {

namespace {

constexpr std::array<std::pair<PolicyKind, std::string_view>, 6> kNames = {{
    {PolicyKind::kConstant, "constant"},
    {PolicyKind::kPowerLaw, "power-law"},
    {PolicyKind::kBangBang, "bang-bang"},
    {PolicyKind::kStateDependent, "state-dependent"},
    {PolicyKind::kSampledRelaxed, "sampled-relaxed"},
    {PolicyKind::kReplicaExchange, "replica-exchange"},
}};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string_view policy_name(PolicyKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

bool needs_solution(PolicyKind kind) {
  return kind == PolicyKind::kBangBang || kind == PolicyKind::kStateDependent ||
         kind == PolicyKind::kSampledRelaxed;
}

Policy make_constant(double beta, std::optional<TemperatureRange> range) {
  if (!(std::isfinite(beta) && beta >= 0.0)) {
    throw std::invalid_argument("constant temperature must be finite and >= 0");
  }
  if (range && !range->contains(beta)) {
    throw std::invalid_argument("constant temperature outside the allowed range");
  }
  return ConstantTemperature{beta};
}

Policy make_power_law(double d, double b) {
  if (!(d > 0.0 && std::isfinite(d))) {
    throw std::invalid_argument("power-law scale d must be positive");
  }
  if (!(b >= 0.5 && b <= 1.0)) {
    throw std::invalid_argument("power-law exponent b must lie in [0.5, 1]");
  }
  return PowerLawTemperature{d, b};
}

Policy make_solution_policy(PolicyKind kind, SolutionPtr sol) {
  if (!sol) throw std::invalid_argument("policy requires an HJB solution");
  switch (kind) {
    case PolicyKind::kBangBang:
      return BangBangTemperature{std::move(sol)};
    case PolicyKind::kStateDependent:
      return StateDependentTemperature{std::move(sol)};
    case PolicyKind::kSampledRelaxed:
      return SampledRelaxedTemperature{std::move(sol)};
    default:
      throw std::invalid_argument("policy does not use an HJB solution");
  }
}

double temperature(const Policy& policy, long k, double x, double u01) {
  return std::visit(
      Overloaded{
          [](const ConstantTemperature& p) { return p.beta; },
          [k](const PowerLawTemperature& p) {
            return std::pow(p.d / (1.0 + static_cast<double>(k)), p.b);
          },
          [x](const BangBangTemperature& p) {
            const auto& range = p.sol->params.range;
            return eval_vxx(*p.sol, x) < 0.0 ? range.hi() : range.lo();
          },
          [x](const StateDependentTemperature& p) {
            const double h = eval_h(*p.sol, x);
            return 0.5 * h * h;
          },
          [x, u01](const SampledRelaxedTemperature& p) {
            const auto& params = p.sol->params;
            return sample(TruncExpDist(eval_vxx(*p.sol, x) / params.lambda, params.range),
                          u01);
          },
      },
      policy);
}

}  // namespace tempctl
