#include "asal/adaptive.hpp"

#include <cmath>
#include <limits>

#include "asal/auglag.hpp"

namespace asal {

double ToleranceSchedule::tau(std::uint64_t k) const {
  switch (rule) {
    case Rule::kHarmonic:
      return tau0 / static_cast<double>(k + 1);
    case Rule::kGeometric:
      return tau0 * std::pow(1.0 / decay, static_cast<double>(k));
    case Rule::kPolynomial:
      return tau0 / std::pow(static_cast<double>(k + 1), power);
  }
  return tau0;
}

double relative_variance(const BatchStats& stats, double theta_g, double reduced_grad_norm_sq) {
  if (reduced_grad_norm_sq <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return stats.sample_variance_total /
         (theta_g * theta_g * static_cast<double>(stats.batch_size) * reduced_grad_norm_sq);
}

std::size_t next_sample_size(std::size_t current, double nu_t, const SamplerConfig& cfg) {
  if (std::isinf(nu_t)) {
    return current;  // reduced gradient vanished; termination handles it
  }
  auto scaled = [&]() -> std::size_t {
    const double raw = std::ceil(nu_t * static_cast<double>(current));
    if (!(raw < static_cast<double>(cfg.s_max))) return cfg.s_max;
    return static_cast<std::size_t>(raw);
  };
  if (nu_t > 1.0) {
    return std::max(cfg.s_min, scaled());
  }
  if (nu_t < cfg.nu_l && current > cfg.s_l) {
    return std::max(cfg.s_min, scaled());
  }
  return current;
}

bool tolerance_test(double reduced_grad_stochastic_norm_sq, double c_norm_sq,
                    const ToleranceSchedule& sched, std::uint64_t k) {
  const double rhs = sched.theta_e_tilde * sched.theta_e_tilde * c_norm_sq + sched.tau(k);
  return reduced_grad_stochastic_norm_sq <= rhs;
}

bool theoretical_norm_condition(const StochasticObjective& obj, const Vector& x,
                                std::size_t batch_size, double theta_g,
                                double expected_reduced_grad_norm_sq) {
  const auto population = obj.population_size();
  if (!population.has_value()) {
    throw UnsupportedError("theoretical_norm_condition needs a finite-sum objective");
  }
  if (batch_size == 0) {
    throw std::invalid_argument("theoretical_norm_condition: batch size must be positive");
  }
  const auto n = *population;
  Vector mean = Vector::Zero(obj.dimension());
  for (std::int64_t i = 0; i < n; ++i) {
    mean += obj.sample_gradient(x, SampleId{0, static_cast<std::uint64_t>(i)});
  }
  mean /= static_cast<double>(n);
  double variance = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    variance +=
        (obj.sample_gradient(x, SampleId{0, static_cast<std::uint64_t>(i)}) - mean).squaredNorm();
  }
  variance /= static_cast<double>(n);
  return variance / static_cast<double>(batch_size) <=
         theta_g * theta_g * expected_reduced_grad_norm_sq;
}

bool tolerance_condition_oracle(ToleranceVariant variant, const QpProblem& qp, const Vector& x_k,
                                const Vector& lambda_k, double alpha, double eta, double theta_e,
                                double tau_k) {
  const Vector x_star = qp_subproblem_minimizer(qp, lambda_k, alpha);
  const Vector c_star = constraint_value(qp.constraint(), x_star);
  const double c_star_sq = c_star.squaredNorm();

  switch (variant) {
    case ToleranceVariant::kI: {
      const Vector c_k = constraint_value(qp.constraint(), x_k);
      return (c_star - c_k).squaredNorm() <= theta_e * theta_e * c_star_sq + tau_k;
    }
    case ToleranceVariant::kII: {
      const Vector c_k = constraint_value(qp.constraint(), x_k);
      const double l_k = auglag_value(qp.metric_objective(x_k), c_k, lambda_k, alpha);
      const double l_star = auglag_value(qp.metric_objective(x_star), c_star, lambda_k, alpha);
      return l_k - l_star <= 0.5 * alpha * (theta_e * theta_e * c_star_sq + tau_k);
    }
    case ToleranceVariant::kIII: {
      // X = R^n, so R(x, lambda; alpha, eta) = -grad_x L(x, lambda; alpha).
      const Vector grad = qp.true_gradient(x_k) +
                          qp.constraint().a.transpose() *
                              (alpha * constraint_value(qp.constraint(), x_k) - lambda_k);
      (void)eta;
      return grad.squaredNorm() <= theta_e * theta_e * c_star_sq + tau_k;
    }
  }
  throw std::logic_error("unreachable tolerance variant");
}

}  // namespace asal
