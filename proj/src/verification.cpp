#include "asal/verification.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "asal/auglag.hpp"
#include "asal/adaptive.hpp"
#include "asal/rng.hpp"

namespace asal {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix(m.transpose() * m));
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

QpProblem random_qp_instance(std::uint64_t seed, int max_dim, int max_constraints,
                             double noise_std) {
  RngStream stream(seed, 0x7170696e7374ULL);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const int n = 2 + static_cast<int>(stream.next_below(static_cast<std::uint64_t>(max_dim - 1)));
    const int m_max = std::min(max_constraints, n);
    const int m = 1 + static_cast<int>(stream.next_below(static_cast<std::uint64_t>(m_max)));

    Matrix factor(n, n);
    for (int i = 0; i < n; ++i) factor.row(i) = stream.normal_vector(n).transpose();
    const Matrix q = factor.transpose() * factor + (0.1 + stream.next_uniform()) *
                                                       Matrix::Identity(n, n);
    const Vector q_lin = stream.normal_vector(n);
    Matrix a(m, n);
    for (int i = 0; i < m; ++i) a.row(i) = stream.normal_vector(n).transpose();
    const Vector b = stream.normal_vector(m);

    Eigen::SelfAdjointEigenSolver<Matrix> gram(Matrix(a * a.transpose()));
    if (gram.eigenvalues().minCoeff() < 1e-4) continue;  // want full row rank
    return QpProblem(q, q_lin, AffineConstraint(a, b), noise_std, seed);
  }
  throw NumericalError("random_qp_instance: could not draw a full-row-rank constraint");
}

namespace {

// Dual-side route to the Moreau envelope gradient: solve the prox problem in
// lambda using the explicit quadratic form of q, independent of the primal
// subproblem solve.
Vector moreau_grad_dual_route(const QpProblem& qp, const Vector& u, double alpha) {
  const Matrix& a = qp.constraint().a;
  const Vector q_inv_q = qp.q_matrix().ldlt().solve(qp.q_linear());
  const Matrix h = a * qp.q_matrix().ldlt().solve(Matrix(a.transpose()));
  const int m = qp.constraint().rows();
  const Matrix lhs = h + Matrix::Identity(m, m) / alpha;
  const Vector rhs = a * q_inv_q + qp.constraint().b + u / alpha;
  const Vector prox = lhs.ldlt().solve(rhs);
  return (u - prox) / alpha;
}

struct Tally {
  int violations = 0;
  double worst = 0.0;

  void update(bool ok, double margin) {
    if (!ok) ++violations;
    worst = std::max(worst, margin);
  }
};

std::string tally_detail(const Tally& t, int total) {
  std::ostringstream out;
  out << t.violations << " violations out of " << total << ", worst margin " << t.worst;
  return out.str();
}

}  // namespace

std::vector<CheckResult> run_qp_verification(std::uint64_t seed) {
  std::vector<CheckResult> results;
  RngStream stream(seed, 0x766572696679ULL);

  {  // grad q_alpha(lambda) = c(x*) on 100 random instances
    Tally tally;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
      const QpProblem qp = random_qp_instance(seed + 1000 + i);
      const double alpha = 0.1 + 5.0 * stream.next_uniform();
      const Vector lambda = 3.0 * stream.normal_vector(qp.constraint().rows());
      const Vector via_primal = qp_dual_and_moreau(qp, lambda, alpha).moreau_grad;
      const Vector via_dual = moreau_grad_dual_route(qp, lambda, alpha);
      const double err = (via_primal - via_dual).norm();
      tally.update(err <= 1e-8, err);
    }
    results.push_back({"moreau_identity", tally.violations == 0, tally_detail(tally, total)});
  }

  {  // Lipschitz constant 1/alpha of the envelope gradient, 1e4 pairs
    Tally tally;
    const int instances = 20;
    const int pairs = 500;
    for (int i = 0; i < instances; ++i) {
      const QpProblem qp = random_qp_instance(seed + 2000 + i);
      const int m = qp.constraint().rows();
      const double alpha = 0.1 + 5.0 * stream.next_uniform();
      for (int j = 0; j < pairs; ++j) {
        const Vector u = 3.0 * stream.normal_vector(m);
        const Vector v = 3.0 * stream.normal_vector(m);
        const double lhs = (qp_dual_and_moreau(qp, u, alpha).moreau_grad -
                            qp_dual_and_moreau(qp, v, alpha).moreau_grad)
                               .norm();
        const double rhs = (1.0 + 1e-6) / alpha * (u - v).norm();
        tally.update(lhs <= rhs, lhs - rhs);
      }
    }
    results.push_back(
        {"envelope_lipschitz", tally.violations == 0, tally_detail(tally, instances * pairs)});
  }

  {  // dual strong convexity with mu_q = sigma / (mu + L)
    Tally tally;
    const int instances = 20;
    const int pairs = 100;
    for (int i = 0; i < instances; ++i) {
      const QpProblem qp = random_qp_instance(seed + 3000 + i);
      const Matrix& a = qp.constraint().a;
      Eigen::SelfAdjointEigenSolver<Matrix> gram(Matrix(a * a.transpose()));
      const double mu_q = gram.eigenvalues().minCoeff() / (qp.mu() + qp.smoothness());
      for (int j = 0; j < pairs; ++j) {
        const Vector l1 = 3.0 * stream.normal_vector(qp.constraint().rows());
        const Vector l2 = 3.0 * stream.normal_vector(qp.constraint().rows());
        const Vector g1 = qp.q_matrix().ldlt().solve(Vector(a.transpose() * l1 - qp.q_linear()));
        const Vector g2 = qp.q_matrix().ldlt().solve(Vector(a.transpose() * l2 - qp.q_linear()));
        const double lhs = (a * (g2 - g1)).dot(l2 - l1);
        const double rhs = mu_q * (l2 - l1).squaredNorm();
        const double slack = 1e-9 * (1.0 + std::abs(rhs));
        tally.update(lhs >= rhs - slack, rhs - lhs);
      }
    }
    results.push_back({"dual_strong_convexity", tally.violations == 0,
                       tally_detail(tally, instances * pairs)});
  }

  {  // function gap (feasibility-to-function) and reduced-gradient bounds
    Tally gap_tally;
    Tally reduced_tally;
    const int total = 200;
    for (int i = 0; i < total; ++i) {
      const QpProblem qp = random_qp_instance(seed + 4000 + i);
      const int n = qp.dimension();
      const double alpha = 0.1 + 5.0 * stream.next_uniform();
      const double lip = qp.smoothness() +
                         alpha * spectral_norm(qp.constraint().a) * spectral_norm(qp.constraint().a);
      const double eta = (0.1 + 0.89 * stream.next_uniform()) / lip;
      const Vector lambda = 3.0 * stream.normal_vector(qp.constraint().rows());
      const Vector x = 3.0 * stream.normal_vector(n);
      const Vector x_star = qp_subproblem_minimizer(qp, lambda, alpha);

      const Vector c_x = constraint_value(qp.constraint(), x);
      const Vector c_star = constraint_value(qp.constraint(), x_star);
      const double l_x = auglag_value(qp.metric_objective(x), c_x, lambda, alpha);
      const double l_star = auglag_value(qp.metric_objective(x_star), c_star, lambda, alpha);

      const double gap_lhs = (c_star - c_x).squaredNorm();
      const double gap_rhs = 2.0 / alpha * (l_x - l_star);
      gap_tally.update(gap_lhs <= gap_rhs + 1e-9 * (1.0 + std::abs(gap_rhs)),
                       gap_lhs - gap_rhs);

      const Vector grad = qp.true_gradient(x) +
                          qp.constraint().a.transpose() * (alpha * c_x - lambda);
      const double reduced_lhs = grad.squaredNorm();  // X = R^n so R = -grad L
      const double reduced_rhs = 2.0 / eta * (l_x - l_star);
      reduced_tally.update(reduced_lhs <= reduced_rhs + 1e-9 * (1.0 + std::abs(reduced_rhs)),
                           reduced_lhs - reduced_rhs);
    }
    results.push_back({"function_gap", gap_tally.violations == 0, tally_detail(gap_tally, total)});
    results.push_back({"reduced_gradient_gap", reduced_tally.violations == 0,
                       tally_detail(reduced_tally, total)});
  }

  {  // tolerance condition implications II => I and III => I
    int premise_ii = 0, premise_iii = 0;
    Tally ii_tally, iii_tally;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
      const QpProblem qp = random_qp_instance(seed + 5000 + i);
      const int n = qp.dimension();
      const double alpha = 0.1 + 5.0 * stream.next_uniform();
      const double norm_a = spectral_norm(qp.constraint().a);
      const double lip = qp.smoothness() + alpha * norm_a * norm_a;
      const double eta = 0.5 / lip;
      const double theta_e = 0.9 * stream.next_uniform();
      const double tau_k = std::pow(10.0, -6.0 + 6.0 * stream.next_uniform());
      const Vector lambda = 3.0 * stream.normal_vector(qp.constraint().rows());
      const Vector x_star = qp_subproblem_minimizer(qp, lambda, alpha);
      const double delta = std::pow(10.0, -5.0 + 5.0 * stream.next_uniform());
      const Vector x = x_star + delta * stream.normal_vector(n);

      Eigen::SelfAdjointEigenSolver<Matrix> hess(
          Matrix(qp.q_matrix() + alpha * qp.constraint().a.transpose() * qp.constraint().a));
      const double mu_l = hess.eigenvalues().minCoeff();
      const double theta_tilde = mu_l * theta_e / (2.0 * norm_a);
      const double tau_tilde = mu_l * mu_l * tau_k / (4.0 * norm_a * norm_a);

      const bool cond_i = tolerance_condition_oracle(ToleranceVariant::kI, qp, x, lambda, alpha,
                                                     eta, theta_e, tau_k);
      if (tolerance_condition_oracle(ToleranceVariant::kII, qp, x, lambda, alpha, eta, theta_e,
                                     tau_k)) {
        ++premise_ii;
        ii_tally.update(cond_i, cond_i ? 0.0 : 1.0);
      }
      if (tolerance_condition_oracle(ToleranceVariant::kIII, qp, x, lambda, alpha, eta,
                                     theta_tilde, tau_tilde)) {
        ++premise_iii;
        iii_tally.update(cond_i, cond_i ? 0.0 : 1.0);
      }
    }
    std::ostringstream ii_detail, iii_detail;
    ii_detail << ii_tally.violations << " counterexamples, premise held " << premise_ii << "/"
              << total;
    iii_detail << iii_tally.violations << " counterexamples, premise held " << premise_iii << "/"
               << total;
    results.push_back({"condition_II_implies_I",
                       ii_tally.violations == 0 && premise_ii >= 20, ii_detail.str()});
    results.push_back({"condition_III_implies_I",
                       iii_tally.violations == 0 && premise_iii >= 20, iii_detail.str()});
  }

  return results;
}

}  // namespace asal
