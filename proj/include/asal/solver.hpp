#pragma once

#include <cstdint>
#include <vector>

#include "asal/adaptive.hpp"
#include "asal/auglag.hpp"
#include "asal/core.hpp"
#include "asal/oracle.hpp"
#include "asal/projections.hpp"

namespace asal {

enum class SolveMode { kAdaptive, kFixed };

struct SolverConfig {
  double alpha = 1.0;
  double eta = 0.1;
  SamplerConfig sampler;
  ToleranceSchedule tolerance;
  std::size_t initial_sample_size = 2;
  std::uint64_t budget_gradient_evals = 1'000'000;
  std::uint64_t max_outer = 100'000;
  std::uint64_t max_inner_per_outer = 10'000;
  std::uint64_t seed = 0;
  SolveMode mode = SolveMode::kAdaptive;
  std::size_t fixed_batch_size = 0;  // only read when mode == kFixed

  void validate() const;
};

/// One row per inner iteration; errors are measured at the just-advanced
/// iterate with the deterministic (or metric-pool) gradient.
struct TraceRecord {
  std::uint64_t outer = 0;
  std::uint64_t inner = 0;
  std::size_t batch_size = 0;
  std::uint64_t cum_grad_evals = 0;
  double feasibility_error = 0.0;
  double stationarity_error = 0.0;
  double objective_estimate = 0.0;
  double nu_t = 0.0;
  bool tolerance_test_passed = false;
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  bool stationarity_is_estimate = false;  // metric-pool gradient, not exact
  bool budget_exhausted = false;
  bool inner_cap_hit = false;
  std::uint64_t total_grad_evals = 0;
};

struct SolveResult {
  PrimalDualState state;
  SolverTrace trace;
};

/// The adaptive sampling augmented Lagrangian loop: warm-started inner
/// projected stochastic gradient iterations with norm-test sample-size
/// control, tolerance-test termination, and dual updates
/// lambda <- lambda - alpha c(x_k). Stops when the gradient-evaluation budget
/// is exhausted or max_outer is reached; a budget expiry mid-subproblem keeps
/// the current primal iterate and leaves the multiplier untouched.
SolveResult run_asal(const StochasticObjective& obj, const FeasibleSet& set,
                     const AffineConstraint& c, const SolverConfig& cfg, const Vector& x_init,
                     const Vector& lambda_init);

/// Same loop with the sample-size controller disabled (|S| fixed at
/// cfg.fixed_batch_size); the tolerance test still ends inner loops.
SolveResult run_fixed_baseline(const StochasticObjective& obj, const FeasibleSet& set,
                               const AffineConstraint& c, const SolverConfig& cfg,
                               const Vector& x_init, const Vector& lambda_init);

/// One extra inexact subproblem solve at (x, lambda) with penalty alpha_tilde
/// and a fixed inner tolerance target_gap; returns the refreshed pair
/// (x~, lambda - alpha_tilde c(x~)). Sampling parameters and budget come from
/// cfg.
PrimalDualState post_optimization_step(const StochasticObjective& obj, const FeasibleSet& set,
                                       const AffineConstraint& c, const PrimalDualState& at,
                                       double alpha_tilde, double eta_tilde, double target_gap,
                                       const SolverConfig& cfg);

}  // namespace asal
