#pragma once

#include <cstdint>

#include "asal/core.hpp"
#include "asal/oracle.hpp"
#include "asal/problems/qp.hpp"

namespace asal {

/// Sample size controller parameters: theta_g scales the norm test, nu_l/s_l
/// gate sample-size decreases, s_min/s_max clamp the batch size.
struct SamplerConfig {
  double theta_g = 0.99;
  double nu_l = 0.5;
  std::size_t s_l = 2;
  std::size_t s_min = 2;
  std::size_t s_max = 1'000'000;

  void validate() const {
    if (!(theta_g > 0.0)) throw ConfigError("theta_g must be positive");
    if (!(nu_l > 0.0 && nu_l < 1.0)) throw ConfigError("nu_l must lie in (0, 1)");
    if (s_min < 2) throw ConfigError("s_min must be at least 2");
    if (s_min > s_l || s_l > s_max) throw ConfigError("need s_min <= s_l <= s_max");
  }
};

/// Inner-loop tolerance schedule. The default is tau_k = tau0 / (k+1);
/// tau0 a^{-k} (geometric) and tau0 / (k+1)^p with p > 1 (summable, for the
/// sublinear-rate experiments) are selectable.
struct ToleranceSchedule {
  enum class Rule { kHarmonic, kGeometric, kPolynomial };

  double theta_e_tilde = 0.0;
  double tau0 = 1.0;
  Rule rule = Rule::kHarmonic;
  double decay = 2.0;  // the geometric base a > 1
  double power = 1.5;  // polynomial exponent, > 1

  void validate() const {
    if (!(theta_e_tilde >= 0.0 && theta_e_tilde < 1.0)) {
      throw ConfigError("theta_e_tilde must lie in [0, 1)");
    }
    if (!(tau0 >= 0.0)) throw ConfigError("tau0 must be nonnegative");
    if (rule == Rule::kGeometric && !(decay > 1.0)) {
      throw ConfigError("geometric tolerance decay must exceed 1");
    }
    if (rule == Rule::kPolynomial && !(power > 1.0)) {
      throw ConfigError("polynomial tolerance power must exceed 1");
    }
  }

  double tau(std::uint64_t k) const;
};

/// nu_t = sample_variance_total / (theta_g^2 |S| ||R_S||^2); +infinity when
/// the stochastic reduced gradient vanishes.
double relative_variance(const BatchStats& stats, double theta_g, double reduced_grad_norm_sq);

/// Sample size update of the controller: grow by ceil(nu_t |S|) when the norm
/// test fails (nu_t > 1), shrink toward s_min when nu_t < nu_l and |S| > s_l,
/// otherwise keep the size. Result clamps to [s_min, s_max].
std::size_t next_sample_size(std::size_t current, double nu_t, const SamplerConfig& cfg);

/// Inner termination: ||R_S||^2 <= theta_e_tilde^2 ||c(x)||^2 + tau_k.
bool tolerance_test(double reduced_grad_stochastic_norm_sq, double c_norm_sq,
                    const ToleranceSchedule& sched, std::uint64_t k);

/// Verification oracle for the theoretical sampling condition on a finite-sum
/// objective: population_variance / batch_size <= theta_g^2 * rhs, with the
/// exact population variance computed by full enumeration.
bool theoretical_norm_condition(const StochasticObjective& obj, const Vector& x,
                                std::size_t batch_size, double theta_g,
                                double expected_reduced_grad_norm_sq);

enum class ToleranceVariant { kI, kII, kIII };

/// Verification oracle for the three theoretical tolerance conditions,
/// evaluated exactly on a strongly convex QP (deterministic x_k, closed-form
/// x_k^*). For variant III the (theta_e, tau_k) arguments play the roles of
/// (theta_e_tilde, tau_k_tilde).
bool tolerance_condition_oracle(ToleranceVariant variant, const QpProblem& qp, const Vector& x_k,
                                const Vector& lambda_k, double alpha, double eta, double theta_e,
                                double tau_k);

}  // namespace asal
