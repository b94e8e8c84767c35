#include "asal/solver.hpp"

#include <cmath>
#include <string>

namespace asal {

namespace {

constexpr std::uint64_t kMaxInnerKey = 1u << 20;  // sample streams pack (k, t) as (k << 20) | t
constexpr std::uint64_t kPostOpOuterBase = 1ull << 40;

struct LoopState {
  Vector x;
  std::size_t sample_size;
  std::uint64_t cum_grad_evals = 0;
  std::uint64_t total_inner = 0;
  bool budget_exhausted = false;
  bool inner_cap_hit = false;
};

struct InnerParams {
  double alpha;
  double eta;
  double theta_e_tilde;
  double tau_k;
  std::uint64_t outer_key;   // stream key for sample draws
  std::uint64_t trace_outer; // outer index written to the trace
};

// One inexact subproblem solve: projected stochastic AL steps with
// norm-test batch control until the tolerance test passes. Returns true on
// a tolerance pass, false when the budget or the inner cap stopped it first.
bool solve_subproblem(const StochasticObjective& obj, const FeasibleSet& set,
                      const AffineConstraint& c, const SolverConfig& cfg, const Vector& lambda,
                      const InnerParams& p, LoopState& s, SolverTrace& trace) {
  for (std::uint64_t t = 0;; ++t) {
    if (s.cum_grad_evals >= cfg.budget_gradient_evals) {
      s.budget_exhausted = true;
      return false;
    }
    if (t >= cfg.max_inner_per_outer) {
      s.inner_cap_hit = true;
      return false;
    }

    const auto ids = obj.draw_batch(cfg.seed, p.outer_key, t, s.sample_size);
    const BatchStats stats = obj.batch_gradient(s.x, ids);
    s.cum_grad_evals += ids.size();

    const Vector c_val = constraint_value(c, s.x);
    const Vector al_grad =
        stats.mean_gradient + c.a.transpose() * (p.alpha * c_val - lambda);
    const Vector r_s = reduced_gradient(set, s.x, al_grad, p.eta);
    const double r_s_sq = r_s.squaredNorm();

    s.x += p.eta * r_s;
    if (!s.x.allFinite()) {
      throw NumericalError("non-finite iterate at outer " + std::to_string(p.trace_outer) +
                           ", inner " + std::to_string(t));
    }

    const double nu_t = relative_variance(stats, cfg.sampler.theta_g, r_s_sq);
    if (cfg.mode == SolveMode::kAdaptive) {
      s.sample_size = next_sample_size(s.sample_size, nu_t, cfg.sampler);
    }
    const bool passed =
        r_s_sq <= p.theta_e_tilde * p.theta_e_tilde * c_val.squaredNorm() + p.tau_k;

    TraceRecord rec;
    rec.outer = p.trace_outer;
    rec.inner = t;
    rec.batch_size = ids.size();
    rec.cum_grad_evals = s.cum_grad_evals;
    const ErrorPair errors = primal_errors(
        set, obj, s.x, c, dual_update(lambda, p.alpha, constraint_value(c, s.x)), p.eta);
    rec.feasibility_error = errors.feasibility;
    rec.stationarity_error = errors.stationarity;
    rec.objective_estimate = obj.metric_objective(s.x);
    rec.nu_t = nu_t;
    rec.tolerance_test_passed = passed;
    trace.records.push_back(rec);

    ++s.total_inner;
    if (passed) return true;
  }
}

}  // namespace

void SolverConfig::validate() const {
  AugLagParams{alpha, eta};  // range checks
  sampler.validate();
  tolerance.validate();
  if (budget_gradient_evals == 0) throw ConfigError("gradient budget must be positive");
  if (initial_sample_size < sampler.s_min) {
    throw ConfigError("initial sample size must be at least s_min");
  }
  if (initial_sample_size > sampler.s_max) {
    throw ConfigError("initial sample size exceeds s_max");
  }
  if (max_inner_per_outer == 0 || max_inner_per_outer > kMaxInnerKey) {
    throw ConfigError("max_inner_per_outer must lie in [1, 2^20]");
  }
  if (mode == SolveMode::kFixed && fixed_batch_size < 2) {
    throw ConfigError("fixed mode needs a batch size of at least 2");
  }
}

SolveResult run_asal(const StochasticObjective& obj, const FeasibleSet& set,
                     const AffineConstraint& c, const SolverConfig& cfg, const Vector& x_init,
                     const Vector& lambda_init) {
  cfg.validate();
  if (x_init.size() != obj.dimension() || lambda_init.size() != c.rows() ||
      c.cols() != obj.dimension()) {
    throw std::invalid_argument("run_asal: inconsistent dimensions");
  }

  SolveResult result;
  result.trace.stationarity_is_estimate = !obj.exact_full_gradient();

  LoopState s;
  s.x = set.project(x_init);
  s.sample_size = (cfg.mode == SolveMode::kFixed) ? cfg.fixed_batch_size
                                                  : cfg.initial_sample_size;
  Vector lambda = lambda_init;

  std::uint64_t k = 0;
  for (; k < cfg.max_outer; ++k) {
    InnerParams p;
    p.alpha = cfg.alpha;
    p.eta = cfg.eta;
    p.theta_e_tilde = cfg.tolerance.theta_e_tilde;
    p.tau_k = cfg.tolerance.tau(k);
    p.outer_key = k;
    p.trace_outer = k;
    const bool passed = solve_subproblem(obj, set, c, cfg, lambda, p, s, result.trace);
    if (!passed) break;  // budget or inner cap; multiplier is not updated
    lambda = dual_update(lambda, cfg.alpha, constraint_value(c, s.x));
  }

  result.trace.budget_exhausted = s.budget_exhausted;
  result.trace.inner_cap_hit = s.inner_cap_hit;
  result.trace.total_grad_evals = s.cum_grad_evals;
  result.state.x = s.x;
  result.state.lambda = lambda;
  result.state.outer_iter = k;
  result.state.inner_iter = s.total_inner;
  return result;
}

SolveResult run_fixed_baseline(const StochasticObjective& obj, const FeasibleSet& set,
                               const AffineConstraint& c, const SolverConfig& cfg,
                               const Vector& x_init, const Vector& lambda_init) {
  if (cfg.mode != SolveMode::kFixed) {
    throw ConfigError("run_fixed_baseline requires mode = fixed");
  }
  return run_asal(obj, set, c, cfg, x_init, lambda_init);
}

PrimalDualState post_optimization_step(const StochasticObjective& obj, const FeasibleSet& set,
                                       const AffineConstraint& c, const PrimalDualState& at,
                                       double alpha_tilde, double eta_tilde, double target_gap,
                                       const SolverConfig& cfg) {
  cfg.validate();
  AugLagParams{alpha_tilde, eta_tilde};
  if (!(target_gap >= 0.0)) throw ConfigError("target_gap must be nonnegative");

  SolverTrace scratch;
  LoopState s;
  s.x = set.project(at.x);
  s.sample_size = (cfg.mode == SolveMode::kFixed) ? cfg.fixed_batch_size
                                                  : cfg.initial_sample_size;

  InnerParams p;
  p.alpha = alpha_tilde;
  p.eta = eta_tilde;
  p.theta_e_tilde = 0.0;
  p.tau_k = target_gap;
  p.outer_key = kPostOpOuterBase + at.outer_iter;  // fresh sample streams
  p.trace_outer = at.outer_iter;
  solve_subproblem(obj, set, c, cfg, at.lambda, p, s, scratch);

  PrimalDualState out;
  out.x = s.x;
  out.lambda = dual_update(at.lambda, alpha_tilde, constraint_value(c, s.x));
  out.outer_iter = at.outer_iter + 1;
  out.inner_iter = s.total_inner;
  return out;
}

}  // namespace asal
