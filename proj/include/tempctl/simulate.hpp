#ifndef TEMPCTL_SIMULATE_HPP_
#define TEMPCTL_SIMULATE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tempctl/objective.hpp"
#include "tempctl/policy.hpp"

namespace tempctl {

// Langevin iterate with temperature beta:
//   x - eta * grad + sqrt(2 eta beta) * xi.
// Evaluated as state_dependent_step with h = sqrt(2 beta), so the two agree
// bit for bit.
double langevin_step(double x, double grad, double eta, double beta, double xi);

// Euler-Maruyama step of dX = -f'(X) dt + h(X) dW:
//   x - eta * grad + sqrt(eta) * h * xi.
double state_dependent_step(double x, double grad, double eta, double h, double xi);

// One gradient-descent / Langevin replica-exchange iteration. Both copies
// step, then swap when f(gd) > f(langevin). The first element is the
// gradient-descent copy, which is the reported iterate.
std::pair<double, double> replica_step(double xg, double yl, const Objective1D& obj,
                                       double eta, double gamma, double xi);

// Temperature-policy parameters as read from configuration. Only the fields
// relevant to `kind` are used.
struct PolicySpec {
  PolicyKind kind = PolicyKind::kConstant;
  double beta = 0.0;
  double d = 1.0;
  double b = 1.0;
};

struct SimConfig {
  double eta = 0.5;
  int n_steps = 500;
  int n_reps = 500;
  double x0 = -3.0;
  std::uint64_t seed = 1;
  std::string objective = "double-well";
  PolicySpec policy;
  double replica_gamma = 1.0;
  // Mixed into every stream key. Runs that share (seed, stream_tag) use the
  // same Gaussian sequence per replication.
  std::uint64_t stream_tag = 0;

  void validate() const;
};

struct IterStats {
  int k = 0;
  double mean_f = 0.0;
  double std_err = 0.0;
  double min_f = 0.0;
  double max_f = 0.0;
};

struct RunResult {
  std::vector<IterStats> stats;
  // Replications dropped because their iterate became non-finite.
  int excluded = 0;
};

// Monte Carlo estimate of E f(X_k), k = 1..n_steps, with X_1 = x0. Replication
// r draws from streams keyed by (seed, stream_tag, r), so its trajectory does
// not depend on n_reps or on scheduling. `sol` is required for the
// solution-based policies.
RunResult run(const SimConfig& config, SolutionPtr sol = nullptr);

// Same, with an explicit objective instead of a registry lookup.
RunResult run(const SimConfig& config, const Objective1D& obj, SolutionPtr sol = nullptr);

// Trajectory f(X_1), ..., f(X_n) of a single replication; empty when the
// iterate left the finite range.
std::vector<double> run_replication(const SimConfig& config, const Objective1D& obj,
                                    const SolutionPtr& sol, int rep);

}  // namespace tempctl

#endif  // TEMPCTL_SIMULATE_HPP_
