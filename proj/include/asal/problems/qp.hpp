#pragma once

#include <cstdint>

#include "asal/core.hpp"
#include "asal/oracle.hpp"

namespace asal {

/// Quadratic objective f(x) = (1/2) x^T Q x + q^T x with affine constraint
/// c(x) = A x - b and additive Gaussian gradient noise: F(x, zeta) = f(x) +
/// <zeta, x>, zeta ~ N(0, Sigma). Q must be symmetric positive semidefinite;
/// the closed-form subproblem/dual oracles below additionally require
/// lambda_min(Q) > 0 and X = R^n.
class QpProblem : public StochasticObjective {
 public:
  QpProblem(Matrix q_matrix, Vector q_linear, AffineConstraint constraint, double noise_std,
            std::uint64_t noise_seed);
  QpProblem(Matrix q_matrix, Vector q_linear, AffineConstraint constraint, Matrix noise_cov,
            std::uint64_t noise_seed);

  int dimension() const override { return static_cast<int>(q_linear_.size()); }
  std::optional<std::int64_t> population_size() const override { return std::nullopt; }
  bool exact_full_gradient() const override { return true; }

  double sample_value(const Vector& x, const SampleId& id) const override;
  Vector sample_gradient(const Vector& x, const SampleId& id) const override;
  Vector true_gradient(const Vector& x) const override;
  double metric_objective(const Vector& x) const override;

  const Matrix& q_matrix() const { return q_matrix_; }
  const Vector& q_linear() const { return q_linear_; }
  const AffineConstraint& constraint() const { return constraint_; }
  const Matrix& noise_chol() const { return noise_chol_; }

  /// lambda_min(Q) and lambda_max(Q).
  double mu() const { return mu_; }
  double smoothness() const { return smoothness_; }

 private:
  Vector noise(const SampleId& id) const;

  Matrix q_matrix_;
  Vector q_linear_;
  AffineConstraint constraint_;
  Matrix noise_chol_;
  std::uint64_t noise_seed_;
  double mu_ = 0.0;
  double smoothness_ = 0.0;
};

/// argmin_x L(x, lambda; alpha) for X = R^n: solves
/// (Q + alpha A^T A) x = A^T lambda + alpha A^T b - q directly; the residual
/// must come out below 1e-10 (1 + ||rhs||).
Vector qp_subproblem_minimizer(const QpProblem& qp, const Vector& lambda, double alpha);

/// Negative dual value q(lambda) = -min_x l(x, lambda), via x(lambda) =
/// Q^{-1} (A^T lambda - q).
double qp_dual_value(const QpProblem& qp, const Vector& lambda);

struct QpDualMoreau {
  double q_value;      // q(lambda)
  Vector moreau_grad;  // grad of the Moreau envelope q_alpha at lambda = c(x*)
};
QpDualMoreau qp_dual_and_moreau(const QpProblem& qp, const Vector& lambda, double alpha);

/// Moreau envelope value q_alpha(u) = q(prox) + (1/(2 alpha)) ||prox - u||^2
/// with prox = prox_{alpha q}(u) = u - alpha c(x*(u)).
double qp_moreau_envelope_value(const QpProblem& qp, const Vector& u, double alpha);

/// Primal-dual solution of min f(x) s.t. A x = b (KKT system solve).
struct QpKktSolution {
  Vector x;
  Vector lambda;
};
QpKktSolution qp_kkt_solution(const QpProblem& qp);

}  // namespace asal
