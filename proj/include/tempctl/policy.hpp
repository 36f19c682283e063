#ifndef TEMPCTL_POLICY_HPP_
#define TEMPCTL_POLICY_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "tempctl/hjb.hpp"

namespace tempctl {

using SolutionPtr = std::shared_ptr<const HjbSolution>;

struct ConstantTemperature {
  double beta = 0.0;
};

// beta_k = (d / (1 + k))^b, k = 0, 1, ...
struct PowerLawTemperature {
  double d = 1.0;
  double b = 1.0;
};

// hi where v'' < 0, lo otherwise (ties go to lo).
struct BangBangTemperature {
  SolutionPtr sol;
};

// Effective temperature h(x)^2 / 2 of the entropy-regularized dynamics.
struct StateDependentTemperature {
  SolutionPtr sol;
};

// A temperature drawn from the optimal truncated exponential law at x.
struct SampledRelaxedTemperature {
  SolutionPtr sol;
};

using Policy = std::variant<ConstantTemperature, PowerLawTemperature, BangBangTemperature,
                            StateDependentTemperature, SampledRelaxedTemperature>;

// Replica exchange is an algorithm rather than a temperature policy, but it is
// selected through the same names.
enum class PolicyKind {
  kConstant,
  kPowerLaw,
  kBangBang,
  kStateDependent,
  kSampledRelaxed,
  kReplicaExchange,
};

std::string_view policy_name(PolicyKind kind);
// Throws std::invalid_argument for unknown names.
PolicyKind parse_policy_kind(std::string_view name);
bool needs_solution(PolicyKind kind);

// Validating constructors; throw std::invalid_argument.
// beta must be >= 0, and inside `range` when one is given.
Policy make_constant(double beta, std::optional<TemperatureRange> range = std::nullopt);
Policy make_power_law(double d, double b);
Policy make_solution_policy(PolicyKind kind, SolutionPtr sol);

// Temperature used at iteration k (k >= 0) in state x. u01 in [0, 1) is only
// consumed by SampledRelaxedTemperature.
double temperature(const Policy& policy, long k, double x, double u01 = 0.0);

}  // namespace tempctl

#endif  // TEMPCTL_POLICY_HPP_
