#pragma once

#include <span>

#include "asal/core.hpp"
#include "asal/oracle.hpp"
#include "asal/projections.hpp"

namespace asal {

struct AugLagParams {
  double alpha;  // penalty parameter, > 0
  double eta;    // projected-gradient step size, > 0

  AugLagParams(double alpha_in, double eta_in) : alpha(alpha_in), eta(eta_in) {
    if (!(alpha > 0.0)) throw ConfigError("penalty parameter alpha must be positive");
    if (!(eta > 0.0)) throw ConfigError("step size eta must be positive");
  }
};

/// L(x, lambda; alpha) = f(x) - <lambda, c(x)> + (alpha/2) ||c(x)||^2,
/// assembled from a precomputed objective value and constraint value.
double auglag_value(double f_value, const Vector& c_val, const Vector& lambda, double alpha);

/// Batch-mean objective gradient plus A^T (alpha c(x) - lambda).
Vector stochastic_auglag_gradient(const StochasticObjective& obj, const Vector& x,
                                  std::span<const SampleId> ids, const AffineConstraint& c,
                                  const Vector& lambda, double alpha);

/// Constraint part of the augmented Lagrangian gradient, A^T (alpha c(x) - lambda);
/// add any objective gradient to obtain the full AL gradient.
Vector auglag_constraint_gradient(const AffineConstraint& c, const Vector& x,
                                  const Vector& lambda, double alpha);

/// R = (proj_X(x - eta g) - x) / eta for a gradient g.
Vector reduced_gradient(const FeasibleSet& set, const Vector& x, const Vector& grad, double eta);

/// || (proj_X(x - eta (grad f(x) - A^T lambda_next)) - x) / eta || with the
/// deterministic (or metric-pool) objective gradient.
double stationarity_error(const FeasibleSet& set, const StochasticObjective& obj, const Vector& x,
                          const AffineConstraint& c, const Vector& lambda_next, double eta);

/// Both primal error metrics at x, with the multiplier already advanced to
/// lambda_next = lambda - alpha c(x).
ErrorPair primal_errors(const FeasibleSet& set, const StochasticObjective& obj, const Vector& x,
                        const AffineConstraint& c, const Vector& lambda_next, double eta);

/// lambda - alpha c_val.
Vector dual_update(const Vector& lambda, double alpha, const Vector& c_val);

}  // namespace asal
