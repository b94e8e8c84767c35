#include "asal/problems/qp.hpp"

#include <Eigen/Eigenvalues>
#include <utility>

#include "asal/rng.hpp"

namespace asal {

namespace {

Matrix validated_symmetric(Matrix m) {
  check_finite(m, "quadratic term");
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("quadratic term must be square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("quadratic term must be symmetric");
  }
  return 0.5 * (m + m.transpose());
}

}  // namespace

QpProblem::QpProblem(Matrix q_matrix, Vector q_linear, AffineConstraint constraint,
                     double noise_std, std::uint64_t noise_seed)
    : QpProblem(std::move(q_matrix), Vector(q_linear), std::move(constraint),
                Matrix(noise_std * noise_std *
                       Matrix::Identity(q_linear.size(), q_linear.size())),
                noise_seed) {}

QpProblem::QpProblem(Matrix q_matrix, Vector q_linear, AffineConstraint constraint,
                     Matrix noise_cov, std::uint64_t noise_seed)
    : q_matrix_(validated_symmetric(std::move(q_matrix))),
      q_linear_(std::move(q_linear)),
      constraint_(std::move(constraint)),
      noise_seed_(noise_seed) {
  check_finite(q_linear_, "linear term");
  if (q_matrix_.rows() != q_linear_.size() || constraint_.cols() != q_linear_.size()) {
    throw std::invalid_argument("QP dimensions are inconsistent");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(q_matrix_);
  mu_ = eig.eigenvalues().minCoeff();
  smoothness_ = eig.eigenvalues().maxCoeff();
  if (mu_ < -1e-10 * std::max(1.0, smoothness_)) {
    throw ConfigError("quadratic term is not positive semidefinite");
  }
  if (noise_cov.cwiseAbs().maxCoeff() == 0.0) {
    noise_chol_ = Matrix::Zero(q_linear_.size(), q_linear_.size());
  } else {
    noise_chol_ = cholesky(noise_cov);
  }
}

Vector QpProblem::noise(const SampleId& id) const {
  RngStream stream(noise_seed_, id.stream, id.index);
  return noise_chol_ * stream.normal_vector(dimension());
}

double QpProblem::sample_value(const Vector& x, const SampleId& id) const {
  return metric_objective(x) + noise(id).dot(x);
}

Vector QpProblem::sample_gradient(const Vector& x, const SampleId& id) const {
  return true_gradient(x) + noise(id);
}

Vector QpProblem::true_gradient(const Vector& x) const { return q_matrix_ * x + q_linear_; }

double QpProblem::metric_objective(const Vector& x) const {
  return 0.5 * x.dot(q_matrix_ * x) + q_linear_.dot(x);
}

namespace {

void require_strongly_convex(const QpProblem& qp, const char* op) {
  if (!(qp.mu() > 0.0)) {
    throw UnsupportedError(std::string(op) + " requires a strongly convex quadratic");
  }
}

Vector solve_spd(const Matrix& m, const Vector& rhs, const char* op) {
  Eigen::LDLT<Matrix> ldlt(m);
  const Vector x = ldlt.solve(rhs);
  if ((m * x - rhs).norm() > 1e-10 * (1.0 + rhs.norm())) {
    throw NumericalError(std::string(op) + ": linear solve residual too large");
  }
  return x;
}

}  // namespace

Vector qp_subproblem_minimizer(const QpProblem& qp, const Vector& lambda, double alpha) {
  require_strongly_convex(qp, "qp_subproblem_minimizer");
  const Matrix& a = qp.constraint().a;
  const Matrix lhs = qp.q_matrix() + alpha * a.transpose() * a;
  const Vector rhs = a.transpose() * (lambda + alpha * qp.constraint().b) - qp.q_linear();
  return solve_spd(lhs, rhs, "qp_subproblem_minimizer");
}

double qp_dual_value(const QpProblem& qp, const Vector& lambda) {
  require_strongly_convex(qp, "qp_dual_value");
  const Matrix& a = qp.constraint().a;
  const Vector x = solve_spd(qp.q_matrix(), Vector(a.transpose() * lambda - qp.q_linear()),
                             "qp_dual_value");
  const double lagrangian = qp.metric_objective(x) - lambda.dot(a * x - qp.constraint().b);
  return -lagrangian;
}

QpDualMoreau qp_dual_and_moreau(const QpProblem& qp, const Vector& lambda, double alpha) {
  QpDualMoreau out;
  out.q_value = qp_dual_value(qp, lambda);
  out.moreau_grad = constraint_value(qp.constraint(), qp_subproblem_minimizer(qp, lambda, alpha));
  return out;
}

double qp_moreau_envelope_value(const QpProblem& qp, const Vector& u, double alpha) {
  const Vector x_star = qp_subproblem_minimizer(qp, u, alpha);
  const Vector prox = u - alpha * constraint_value(qp.constraint(), x_star);
  return qp_dual_value(qp, prox) + (prox - u).squaredNorm() / (2.0 * alpha);
}

QpKktSolution qp_kkt_solution(const QpProblem& qp) {
  require_strongly_convex(qp, "qp_kkt_solution");
  const Matrix& a = qp.constraint().a;
  const int n = qp.dimension();
  const int m = qp.constraint().rows();
  Matrix kkt = Matrix::Zero(n + m, n + m);
  kkt.topLeftCorner(n, n) = qp.q_matrix();
  kkt.topRightCorner(n, m) = -a.transpose();
  kkt.bottomLeftCorner(m, n) = a;
  Vector rhs(n + m);
  rhs.head(n) = -qp.q_linear();
  rhs.tail(m) = qp.constraint().b;
  const Vector sol = kkt.fullPivLu().solve(rhs);
  if ((kkt * sol - rhs).norm() > 1e-8 * (1.0 + rhs.norm())) {
    throw NumericalError("qp_kkt_solution: KKT system is singular");
  }
  return {sol.head(n), sol.tail(m)};
}

}  // namespace asal
