#include "tempctl/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "tempctl/random.hpp"
#include "tempctl/simulate.hpp"

namespace tempctl {

namespace {

constexpr int kMaxBracketDoublings = 200;
constexpr int kMaxNewtonIterations = 100;

bool finite(double a, double b) { return std::isfinite(a) && std::isfinite(b); }

// Residual and its derivative in m for a fixed linear part.
struct ResidualFn {
  double linear;  // -rho v - f'(x) vx + f(x)
  double lambda;
  TemperatureRange range;

  double operator()(double m) const {
    return linear - lambda * log_partition(TruncExpDist(m / lambda, range));
  }
  double slope(double m) const { return mean(TruncExpDist(m / lambda, range)); }
};

double find_root(const ResidualFn& residual, double guess) {
  double m = std::isfinite(guess) ? guess : 0.0;
  double r = residual(m);
  if (r == 0.0) return m;
  if (!std::isfinite(r)) throw RootSolveError("non-finite HJB residual");

  // The slope is at most hi, so the root lies at least |r| / hi away.
  const double direction = r < 0.0 ? 1.0 : -1.0;
  double width = std::max(std::abs(r) / residual.range.hi(), 1e-12 * (1.0 + std::abs(m)));
  double lo = m;
  double hi = m;
  int doublings = 0;
  for (;; ++doublings) {
    if (doublings > kMaxBracketDoublings) {
      throw RootSolveError("HJB root bracket not found after 200 doublings");
    }
    const double probe = m + direction * width;
    const double rp = residual(probe);
    if (!std::isfinite(rp)) throw RootSolveError("non-finite HJB residual");
    if ((rp >= 0.0) == (direction > 0.0)) {
      lo = direction > 0.0 ? m : probe;
      hi = direction > 0.0 ? probe : m;
      if (rp == 0.0) return probe;
      break;
    }
    m = probe;
    r = rp;
    width *= 2.0;
  }

  // Safeguarded Newton on [lo, hi] with residual(lo) < 0 < residual(hi).
  double x = direction > 0.0 ? lo : hi;
  double rx = residual(x);
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    double next = x - rx / residual.slope(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double rn = residual(next);
    if (rn == 0.0) return next;
    if (rn < 0.0) {
      lo = next;
    } else {
      hi = next;
    }
    const double moved = std::abs(next - x);
    x = next;
    rx = rn;
    const double tol = std::max(1e-10, 4.0 * std::numeric_limits<double>::epsilon() *
                                           std::abs(x));
    if (moved <= tol || hi - lo <= tol) break;
  }
  return x;
}

struct Node {
  double v;
  double vx;
  double vxx;
};

// Integrates from x = 0 over n_steps nodes with signed spacing h. Stops at
// the first node whose state exceeds the threshold; returns the accepted nodes
// (including x = 0) and the divergence point, if any.
struct Sweep {
  std::vector<Node> nodes;
  std::optional<double> blowup;
};

Sweep sweep(const Objective1D& obj, const HjbParams& params, ShootingInit init, long n_steps,
            double h) {
  Sweep out;
  const double limit = params.blowup_threshold;
  auto within = [&](double v, double vx) {
    return finite(v, vx) && std::abs(v) <= limit && std::abs(vx) <= limit;
  };

  double v = init.v;
  double vx = init.vx;
  double m = implicit_vxx(0.0, v, vx, obj, params, 0.0);
  out.nodes.push_back({v, vx, m});

  const double step = std::abs(h);
  const double sign = h > 0.0 ? 1.0 : -1.0;
  for (long i = 0; i < n_steps; ++i) {
    const double x = sign * static_cast<double>(i) * step;
    const double x_half = sign * (static_cast<double>(i) + 0.5) * step;
    const double x_next = sign * static_cast<double>(i + 1) * step;

    // Each stage solves for its own v'', warm-started from the previous one.
    double guess = m;
    auto accel = [&](double xs, double vs, double vxs) -> std::optional<double> {
      if (!finite(vs, vxs)) return std::nullopt;
      guess = implicit_vxx(xs, vs, vxs, obj, params, guess);
      return guess;
    };
    const auto a1 = accel(x, v, vx);
    const double s2 = vx + 0.5 * h * a1.value_or(0.0);
    const auto a2 = a1 ? accel(x_half, v + 0.5 * h * vx, s2) : std::nullopt;
    const double s3 = vx + 0.5 * h * a2.value_or(0.0);
    const auto a3 = a2 ? accel(x_half, v + 0.5 * h * s2, s3) : std::nullopt;
    const double s4 = vx + h * a3.value_or(0.0);
    const auto a4 = a3 ? accel(x_next, v + h * s3, s4) : std::nullopt;
    if (!a4) {
      out.blowup = x_next;
      return out;
    }

    const double v_new = v + h / 6.0 * (vx + 2.0 * s2 + 2.0 * s3 + s4);
    const double vx_new = vx + h / 6.0 * (*a1 + 2.0 * *a2 + 2.0 * *a3 + *a4);
    if (!within(v_new, vx_new)) {
      out.blowup = x_next;
      return out;
    }
    v = v_new;
    vx = vx_new;
    m = implicit_vxx(x_next, v, vx, obj, params, *a4);
    out.nodes.push_back({v, vx, m});
  }
  return out;
}

long steps_to_cover(double distance, double step) {
  if (distance <= 0.0) return 0;
  return static_cast<long>(std::ceil(distance / step - 1e-9));
}

double interpolate(const HjbSolution& sol, const std::vector<double>& values, double x) {
  if (x <= sol.nodes.front()) return values.front();
  if (x >= sol.nodes.back()) return values.back();
  const double step = sol.params.step;
  const double pos = (x - sol.nodes.front()) / step;
  auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= sol.nodes.size()) i = sol.nodes.size() - 2;
  const double t = (x - sol.nodes[i]) / (sol.nodes[i + 1] - sol.nodes[i]);
  if (t <= 0.0) return values[i];
  if (t >= 1.0) return values[i + 1];
  return values[i] + t * (values[i + 1] - values[i]);
}

}  // namespace

void HjbParams::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(rho)) throw std::invalid_argument("discount rho must be positive");
  if (!positive(lambda)) throw std::invalid_argument("entropy weight lambda must be positive");
  if (!positive(step)) throw std::invalid_argument("integration step must be positive");
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max)) {
    throw std::invalid_argument("HJB domain requires x_min < x_max");
  }
  if (!(x_min <= 0.0 && x_max >= 0.0)) {
    throw std::invalid_argument("HJB domain must contain the shooting point x = 0");
  }
  if (!(core_min <= core_max && core_min >= x_min && core_max <= x_max)) {
    throw std::invalid_argument("core interval must lie inside the HJB domain");
  }
  if (n_inits < 1) throw std::invalid_argument("n_inits must be >= 1");
  if (!positive(blowup_threshold)) {
    throw std::invalid_argument("blowup threshold must be positive");
  }
}

double hjb_residual(double x, double v, double vx, double vxx, const Objective1D& obj,
                    const HjbParams& params) {
  return -params.rho * v - obj.grad(x) * vx + obj.eval(x) -
         params.lambda * log_partition(TruncExpDist(vxx / params.lambda, params.range));
}

double implicit_vxx(double x, double v, double vx, const Objective1D& obj,
                    const HjbParams& params, double guess) {
  if (!(std::isfinite(x) && finite(v, vx))) {
    throw RootSolveError("non-finite HJB state");
  }
  const double linear = -params.rho * v - obj.grad(x) * vx + obj.eval(x);
  if (!std::isfinite(linear)) throw RootSolveError("non-finite HJB residual");
  return find_root(ResidualFn{linear, params.lambda, params.range}, guess);
}

IntegrationResult integrate(const Objective1D& obj, const HjbParams& params,
                            ShootingInit init) {
  params.validate();
  if (!finite(init.v, init.vx)) {
    throw std::invalid_argument("shooting initial condition must be finite");
  }
  if (std::abs(init.v) > params.blowup_threshold ||
      std::abs(init.vx) > params.blowup_threshold) {
    return Blowup{0.0};
  }

  const long n_right = steps_to_cover(params.x_max, params.step);
  const long n_left = steps_to_cover(-params.x_min, params.step);
  const Sweep right = sweep(obj, params, init, n_right, params.step);
  const Sweep left = sweep(obj, params, init, n_left, -params.step);

  const long kept_right = static_cast<long>(right.nodes.size()) - 1;
  const long kept_left = static_cast<long>(left.nodes.size()) - 1;
  const double x_hi = static_cast<double>(kept_right) * params.step;
  const double x_lo = -static_cast<double>(kept_left) * params.step;
  if (right.blowup && x_hi < params.core_max) return Blowup{*right.blowup};
  if (left.blowup && x_lo > params.core_min) return Blowup{*left.blowup};

  HjbSolution sol;
  sol.params = params;
  sol.init = init;
  sol.left_blowup = left.blowup;
  sol.right_blowup = right.blowup;
  const std::size_t n = left.nodes.size() + right.nodes.size() - 1;
  sol.nodes.reserve(n);
  sol.v.reserve(n);
  sol.vx.reserve(n);
  sol.vxx.reserve(n);
  auto push = [&](long i, const Node& node) {
    sol.nodes.push_back(static_cast<double>(i) * params.step);
    sol.v.push_back(node.v);
    sol.vx.push_back(node.vx);
    sol.vxx.push_back(node.vxx);
  };
  for (long i = kept_left; i >= 1; --i) push(-i, left.nodes[static_cast<std::size_t>(i)]);
  for (long i = 0; i <= kept_right; ++i) push(i, right.nodes[static_cast<std::size_t>(i)]);
  return sol;
}

std::vector<ShootingInit> draw_inits(int n_inits, std::uint64_t seed) {
  RandomStream stream(stream_key(seed, 0, 0));
  std::vector<ShootingInit> inits;
  inits.reserve(static_cast<std::size_t>(std::max(n_inits, 0)));
  for (int i = 0; i < n_inits; ++i) {
    const double v = stream.normal();
    const double vx = stream.normal();
    inits.push_back({v, vx});
  }
  return inits;
}

ShootingOutcome solve_shooting(const Objective1D& obj, const HjbParams& params,
                               const PilotConfig& pilot,
                               std::optional<ShootingInit> override_init) {
  params.validate();
  const std::vector<ShootingInit> inits =
      override_init ? std::vector<ShootingInit>{*override_init}
                    : draw_inits(params.n_inits, params.init_seed);

  SimConfig pilot_config;
  pilot_config.eta = pilot.eta;
  pilot_config.n_steps = pilot.n_steps;
  pilot_config.n_reps = pilot.n_reps;
  pilot_config.x0 = pilot.x0;
  pilot_config.seed = pilot.seed;
  pilot_config.objective = obj.name;
  pilot_config.policy.kind = PolicyKind::kStateDependent;

  ShootingOutcome outcome;
  std::optional<HjbSolution> best;
  for (std::size_t i = 0; i < inits.size(); ++i) {
    CandidateReport report;
    report.init = inits[i];
    auto result = integrate(obj, params, inits[i]);
    if (const auto* blowup = std::get_if<Blowup>(&result)) {
      report.core_blowup = blowup->x;
      report.pilot_score = std::numeric_limits<double>::infinity();
      outcome.candidates.push_back(report);
      continue;
    }
    auto sol = std::make_shared<HjbSolution>(std::get<HjbSolution>(std::move(result)));
    const RunResult pilot_run = run(pilot_config, obj, sol);
    const double score = pilot_run.stats.back().mean_f;
    sol->pilot_score = std::isnan(score) ? std::numeric_limits<double>::infinity() : score;

    report.survived = true;
    report.left_blowup = sol->left_blowup;
    report.right_blowup = sol->right_blowup;
    report.pilot_score = sol->pilot_score;
    outcome.candidates.push_back(report);
    if (!best || sol->pilot_score < best->pilot_score) {
      best = *sol;
      outcome.chosen = i;
    }
  }
  if (!best) {
    throw NoSurvivingSolution("all " + std::to_string(inits.size()) +
                              " shooting initializations diverged inside the core interval");
  }
  outcome.solution = std::move(*best);
  return outcome;
}

HjbSolution solve(const Objective1D& obj, const HjbParams& params, const PilotConfig& pilot,
                  std::optional<ShootingInit> override_init) {
  return solve_shooting(obj, params, pilot, override_init).solution;
}

double eval_v(const HjbSolution& sol, double x) { return interpolate(sol, sol.v, x); }

double eval_vx(const HjbSolution& sol, double x) { return interpolate(sol, sol.vx, x); }

double eval_vxx(const HjbSolution& sol, double x) { return interpolate(sol, sol.vxx, x); }

double eval_h(const HjbSolution& sol, double x) {
  return diffusion_coeff(eval_vxx(sol, x), sol.params.lambda, sol.params.range);
}

}  // namespace tempctl
