#ifndef TEMPCTL_HJB_HPP_
#define TEMPCTL_HJB_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "tempctl/objective.hpp"
#include "tempctl/truncexp.hpp"

namespace tempctl {

// Parameters of the scalar HJB equation
//
//   -rho v - f'(x) v' + f(x) - lambda ln Z(v'' / lambda) = 0,
//
// where Z is the partition function of the truncated exponential law on
// `range`, and of the shooting method used to solve it.
struct HjbParams {
  double rho = 1.25;
  double lambda = 0.3125;
  TemperatureRange range{0.0001, 500.0};
  double x_min = -8.0;
  double x_max = 8.0;
  // Integration may stop early on either side when the solution diverges,
  // but a candidate must cover [core_min, core_max] to count as a survivor.
  double core_min = -6.0;
  double core_max = 4.0;
  double step = 1e-3;
  int n_inits = 20;
  std::uint64_t init_seed = 1;
  double blowup_threshold = 1e8;

  // Throws std::invalid_argument on inconsistent values.
  void validate() const;
  friend bool operator==(const HjbParams&, const HjbParams&) = default;
};

// Initial condition (v(0), v'(0)).
struct ShootingInit {
  double v = 0.0;
  double vx = 0.0;
  friend bool operator==(const ShootingInit&, const ShootingInit&) = default;
};

// Grid-sampled solution on uniform nodes x_i = i * step. The node range is
// [x_min, x_max] unless a side diverged, in which case that side stops at the
// last node below the blowup threshold and the divergence point is recorded.
struct HjbSolution {
  HjbParams params;
  std::vector<double> nodes;
  std::vector<double> v;
  std::vector<double> vx;
  std::vector<double> vxx;
  ShootingInit init;
  double pilot_score = 0.0;
  std::optional<double> left_blowup;
  std::optional<double> right_blowup;

  double x_lo() const { return nodes.front(); }
  double x_hi() const { return nodes.back(); }
  bool covers(double lo, double hi) const { return x_lo() <= lo && x_hi() >= hi; }
};

// Divergence inside the core interval.
struct Blowup {
  double x = 0.0;
};

using IntegrationResult = std::variant<HjbSolution, Blowup>;

class RootSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoSurvivingSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Left-hand side of the HJB equation with v'' = vxx.
double hjb_residual(double x, double v, double vx, double vxx, const Objective1D& obj,
                    const HjbParams& params);

// Solves hjb_residual(x, v, vx, m) = 0 for m. The residual is increasing in m
// with slope mean(TruncExpDist{m / lambda, range}) in (lo, hi), so the root is
// unique. Safeguarded Newton inside a geometrically expanded bracket; `guess`
// seeds both. Throws RootSolveError for non-finite inputs or when the bracket
// cannot be formed within 200 doublings.
double implicit_vxx(double x, double v, double vx, const Objective1D& obj,
                    const HjbParams& params, double guess = 0.0);

// Classical RK4 on (v, v')' = (v', implicit_vxx) from x = 0 outward to both
// ends of the domain.
IntegrationResult integrate(const Objective1D& obj, const HjbParams& params,
                            ShootingInit init);

// Pilot Monte Carlo used to rank surviving candidates: the state-dependent
// algorithm from x0, scored by mean f at the last iteration.
struct PilotConfig {
  double eta = 0.125;
  int n_steps = 200;
  int n_reps = 50;
  double x0 = -3.0;
  std::uint64_t seed = 1;
};

struct CandidateReport {
  ShootingInit init;
  bool survived = false;
  // Divergence point (survivors may still be truncated outside the core).
  std::optional<double> left_blowup;
  std::optional<double> right_blowup;
  std::optional<double> core_blowup;
  double pilot_score = 0.0;
};

struct ShootingOutcome {
  HjbSolution solution;
  std::vector<CandidateReport> candidates;
  std::size_t chosen = 0;
};

// Shooting over n_inits i.i.d. standard normal initial conditions drawn from
// init_seed (or the single `override_init`). Survivors are ranked by pilot
// score, lowest first; ties go to the earlier candidate. Throws
// NoSurvivingSolution when every candidate diverges inside the core.
ShootingOutcome solve_shooting(const Objective1D& obj, const HjbParams& params,
                               const PilotConfig& pilot,
                               std::optional<ShootingInit> override_init = std::nullopt);

HjbSolution solve(const Objective1D& obj, const HjbParams& params,
                  const PilotConfig& pilot,
                  std::optional<ShootingInit> override_init = std::nullopt);

// The n_inits shooting initial conditions for a seed.
std::vector<ShootingInit> draw_inits(int n_inits, std::uint64_t seed);

// Linear interpolation between nodes, clamped to the solved span.
double eval_v(const HjbSolution& sol, double x);
double eval_vx(const HjbSolution& sol, double x);
double eval_vxx(const HjbSolution& sol, double x);
// diffusion_coeff(eval_vxx(x), lambda, range).
double eval_h(const HjbSolution& sol, double x);

}  // namespace tempctl

#endif  // TEMPCTL_HJB_HPP_
