#include "asal/auglag.hpp"

namespace asal {

double auglag_value(double f_value, const Vector& c_val, const Vector& lambda, double alpha) {
  if (c_val.size() != lambda.size()) {
    throw std::invalid_argument("auglag_value: constraint and multiplier dimensions differ");
  }
  return f_value - lambda.dot(c_val) + 0.5 * alpha * c_val.squaredNorm();
}

Vector auglag_constraint_gradient(const AffineConstraint& c, const Vector& x,
                                  const Vector& lambda, double alpha) {
  return c.a.transpose() * (alpha * constraint_value(c, x) - lambda);
}

Vector stochastic_auglag_gradient(const StochasticObjective& obj, const Vector& x,
                                  std::span<const SampleId> ids, const AffineConstraint& c,
                                  const Vector& lambda, double alpha) {
  const BatchStats stats = obj.batch_gradient(x, ids);
  return stats.mean_gradient + auglag_constraint_gradient(c, x, lambda, alpha);
}

Vector reduced_gradient(const FeasibleSet& set, const Vector& x, const Vector& grad, double eta) {
  if (!(eta > 0.0)) throw ConfigError("reduced_gradient requires eta > 0");
  return (set.project(x - eta * grad) - x) / eta;
}

double stationarity_error(const FeasibleSet& set, const StochasticObjective& obj, const Vector& x,
                          const AffineConstraint& c, const Vector& lambda_next, double eta) {
  const Vector grad = obj.true_gradient(x) - c.a.transpose() * lambda_next;
  return reduced_gradient(set, x, grad, eta).norm();
}

ErrorPair primal_errors(const FeasibleSet& set, const StochasticObjective& obj, const Vector& x,
                        const AffineConstraint& c, const Vector& lambda_next, double eta) {
  return ErrorPair{feasibility_error(c, x),
                   stationarity_error(set, obj, x, c, lambda_next, eta)};
}

Vector dual_update(const Vector& lambda, double alpha, const Vector& c_val) {
  if (lambda.size() != c_val.size()) {
    throw std::invalid_argument("dual_update: dimension mismatch");
  }
  return lambda - alpha * c_val;
}

}  // namespace asal
