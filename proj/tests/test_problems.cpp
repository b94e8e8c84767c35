#include <doctest.h>

#include <cmath>

#include "asal/auglag.hpp"
#include "asal/problems/logistic.hpp"
#include "asal/problems/qp.hpp"
#include "asal/problems/truss.hpp"
#include "asal/rng.hpp"
#include "asal/verification.hpp"
#include "support.hpp"

using namespace asal;

TEST_CASE("qp_subproblem_minimizer") {
  SUBCASE("no constraint gives the unconstrained minimizer") {
    RngStream stream(71);
    Matrix q(2, 2);
    q << 3, 1, 1, 2;
    const Vector lin = stream.normal_vector(2);
    QpProblem qp(q, lin, AffineConstraint(Matrix::Zero(1, 2), Vector::Zero(1)), 0.0, 1);
    const Vector x = qp_subproblem_minimizer(qp, Vector::Zero(1), 1.0);
    CHECK((q * x + lin).norm() <= 1e-10);
  }
  SUBCASE("identity problem centered at zero") {
    Matrix a = Matrix::Identity(2, 2);
    QpProblem qp(Matrix::Identity(2, 2), Vector::Zero(2), AffineConstraint(a, Vector::Zero(2)),
                 0.0, 1);
    CHECK(qp_subproblem_minimizer(qp, Vector::Zero(2), 1.0).norm() <= 1e-12);
  }
  SUBCASE("AL gradient vanishes at the returned point") {
    for (int trial = 0; trial < 20; ++trial) {
      const QpProblem qp = random_qp_instance(100 + trial);
      RngStream stream(200 + trial);
      const Vector lambda = stream.normal_vector(qp.constraint().rows());
      const double alpha = 0.3 + 2.0 * stream.next_uniform();
      const Vector x = qp_subproblem_minimizer(qp, lambda, alpha);
      const Vector grad =
          qp.true_gradient(x) + qp.constraint().a.transpose() *
                                    (alpha * constraint_value(qp.constraint(), x) - lambda);
      CHECK(grad.norm() <= 1e-9);
    }
  }
}

TEST_CASE("Moreau envelope oracle") {
  const QpProblem qp = random_qp_instance(301);
  const double alpha = 0.7;

  SUBCASE("KKT multiplier is a fixed point") {
    const auto kkt = qp_kkt_solution(qp);
    const auto dm = qp_dual_and_moreau(qp, kkt.lambda, alpha);
    CHECK(dm.moreau_grad.norm() <= 1e-8);
  }

  SUBCASE("finite differences of the envelope match the gradient") {
    RngStream stream(302);
    const Vector u = stream.normal_vector(qp.constraint().rows());
    const auto dm = qp_dual_and_moreau(qp, u, alpha);
    const Vector fd = asal::testing::central_difference(
        [&](const Vector& p) { return qp_moreau_envelope_value(qp, p, alpha); }, u, 1e-6);
    CHECK((fd - dm.moreau_grad).norm() <= 1e-5 * (1.0 + dm.moreau_grad.norm()));
  }

  SUBCASE("envelope gradient is (1/alpha)-Lipschitz") {
    RngStream stream(303);
    for (int trial = 0; trial < 100; ++trial) {
      const Vector u = 2.0 * stream.normal_vector(qp.constraint().rows());
      const Vector v = 2.0 * stream.normal_vector(qp.constraint().rows());
      const double lhs = (qp_dual_and_moreau(qp, u, alpha).moreau_grad -
                          qp_dual_and_moreau(qp, v, alpha).moreau_grad)
                             .norm();
      CHECK(lhs <= (1.0 + 1e-9) / alpha * (u - v).norm());
    }
  }

  SUBCASE("oracles require strong convexity") {
    Matrix q = Matrix::Zero(2, 2);
    q(0, 0) = 1.0;  // singular
    Matrix a(1, 2);
    a << 1, 1;
    QpProblem qp_singular(q, Vector::Ones(2), AffineConstraint(a, Vector::Zero(1)), 0.0, 1);
    CHECK_THROWS_AS(qp_subproblem_minimizer(qp_singular, Vector::Zero(1), 1.0),
                    UnsupportedError);
  }
}

TEST_CASE("QP verification suites pass") {
  for (const auto& check : run_qp_verification(2024)) {
    INFO(check.name, ": ", check.detail);
    CHECK(check.passed);
  }
}

TEST_CASE("build_logistic") {
  const Dataset data = make_synthetic_classification(50, 6, 77);

  SUBCASE("slack encoding shapes and defaults") {
    const LogisticInstance inst = build_logistic(data, 5, SlabEncoding::kSlack);
    CHECK(inst.objective->dimension() == 8);
    CHECK(inst.constraint.rows() == 3);
    CHECK(inst.b1 == 0.1);
    CHECK(inst.b2 == 0.02);
    CHECK(inst.objective->gamma() == doctest::Approx(1.0 / 50.0));

    // Slack rows encode <a2,x> + s1 = b2 and -<a2,x> + s2 = b2.
    Vector x = Vector::Zero(8);
    x.head(6) = Vector::Ones(6);
    x[6] = 0.25;
    x[7] = 0.5;
    const Vector c = constraint_value(inst.constraint, x);
    CHECK(c[0] == doctest::Approx(inst.a1.sum() - 0.1));
    CHECK(c[1] == doctest::Approx(inst.a2.sum() + 0.25 - 0.02));
    CHECK(c[2] == doctest::Approx(-inst.a2.sum() + 0.5 - 0.02));

    // X = R^n x [0, inf)^2.
    Vector y = Vector::Ones(8);
    y[6] = -3.0;
    const Vector p = inst.set.project(y);
    CHECK(p[6] == 0.0);
    CHECK(p.head(6) == y.head(6));
  }

  SUBCASE("slab encoding keeps one equality") {
    const LogisticInstance inst = build_logistic(data, 5, SlabEncoding::kSlabInX);
    CHECK(inst.objective->dimension() == 6);
    CHECK(inst.constraint.rows() == 1);
    const Vector inside = inst.set.project(Vector::Ones(6));
    CHECK(std::abs(inst.a2.dot(inside)) <= 0.02 + 1e-12);
  }

  SUBCASE("loss at zero is log 2 and the mean matches the objective") {
    const LogisticInstance inst = build_logistic(data, 5);
    const auto& obj = *inst.objective;
    const Vector zero = Vector::Zero(obj.dimension());
    CHECK(obj.sample_value(zero, SampleId{0, 7}) == doctest::Approx(std::log(2.0)));

    RngStream stream(78);
    Vector x = Vector::Zero(obj.dimension());
    x.head(6) = 0.3 * stream.normal_vector(6);
    double mean = 0.0;
    for (std::uint64_t i = 0; i < 50; ++i) mean += obj.sample_value(x, SampleId{0, i});
    mean /= 50.0;
    CHECK(obj.metric_objective(x) == doctest::Approx(mean).epsilon(1e-12));
  }

  SUBCASE("empty dataset rejected") {
    Dataset empty;
    empty.features = Matrix(0, 0);
    empty.labels = Vector(0);
    CHECK_THROWS_AS(build_logistic(empty, 5), ConfigError);
  }

  SUBCASE("full gradient matches finite differences") {
    const LogisticInstance inst = build_logistic(data, 5);
    RngStream stream(79);
    Vector x = Vector::Zero(8);
    x.head(6) = 0.5 * stream.normal_vector(6);
    const Vector fd = asal::testing::central_difference(
        [&](const Vector& p) { return inst.objective->metric_objective(p); }, x,
        1e-6 * (1.0 + x.norm()));
    const Vector g = inst.objective->true_gradient(x);
    CHECK((g - fd).norm() <= 1e-6 * (1.0 + g.norm()));
  }
}

TEST_CASE("truss problem") {
  TrussProblem truss(5);

  SUBCASE("equal limit states give (g + ln 7)/7") {
    // Reproduce the draw for one id from the documented sampling recipe, then
    // choose areas that equalize the limit states.
    const SampleId id{9, 4};
    RngStream stream(5, id.stream, id.index);
    const Matrix lch = cholesky(TrussProblem::stress_correlation());
    Vector mu_log(7), sigma_log(7);
    for (int i = 0; i < 7; ++i) {
      const auto p = lognormal_from_moments(i < 2 ? 100.0 : 200.0, i < 2 ? 20.0 : 40.0);
      mu_log[i] = p.mu_log;
      sigma_log[i] = p.sigma_log;
    }
    const Vector sigma = draw_mvlognormal(stream, lch, mu_log, sigma_log);
    const auto pf = lognormal_from_moments(1e6, 4e5);
    const double force = std::exp(pf.mu_log + pf.sigma_log * stream.next_normal());

    const double target_g = 1.5;
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    Vector x(8);
    for (int i = 0; i < 7; ++i) {
      const double c_i = (i < 2) ? 0.5 * inv_sqrt3 : inv_sqrt3;
      x[i] = force / (c_i * TrussProblem::kAreaUnit * (target_g + sigma[i]));
    }
    x[7] = 0.0;
    CHECK(truss.sample_value(x, id) ==
          doctest::Approx((target_g + std::log(7.0)) / 7.0).epsilon(1e-10));
  }

  SUBCASE("logsumexp stays finite for extreme limit states") {
    Vector x(8);
    x.setConstant(1e-8);  // drives g_i toward 1e10
    x[7] = 0.0;
    const double v = truss.sample_value(x, SampleId{0, 0});
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }

  SUBCASE("metric pool gradient matches finite differences") {
    TrussProblem small(5, TrussEncoding::kSlack, 200);
    Vector x(8);
    x << 15.0, 20.0, 30.0, 12.0, 40.0, 25.0, 11.0, 5.0;
    const Vector fd = asal::testing::central_difference(
        [&](const Vector& p) { return small.metric_objective(p); }, x, 1e-6);
    const Vector g = small.true_gradient(x);
    CHECK((g - fd).norm() <= 1e-5 * (1.0 + g.norm()));
  }

  SUBCASE("instance wiring") {
    const TrussInstance slack = build_truss(5);
    CHECK(slack.objective->dimension() == 8);
    CHECK(slack.constraint.rows() == 1);
    Vector x(8);
    x << 20, 20, 20, 20, 20, 20, 20, 10;
    CHECK(constraint_value(slack.constraint, x)[0] == doctest::Approx(0.0));
    CHECK(slack.set.contains(x));

    const TrussInstance capped = build_truss(5, TrussEncoding::kCapInX);
    CHECK(capped.objective->dimension() == 7);
    CHECK(capped.constraint.rows() == 0);
    const Vector p = capped.set.project(50.0 * Vector::Ones(7));
    CHECK(p.sum() <= 150.0 + 1e-9);

    CHECK(slack.objective->areas_mm2(x)[0] == doctest::Approx(2e4));
  }

  SUBCASE("log-stress correlation matches the target at a million draws") {
    const Matrix lch = cholesky(TrussProblem::stress_correlation());
    Vector mu_log(7), sigma_log(7);
    for (int i = 0; i < 7; ++i) {
      const auto p = lognormal_from_moments(i < 2 ? 100.0 : 200.0, i < 2 ? 20.0 : 40.0);
      mu_log[i] = p.mu_log;
      sigma_log[i] = p.sigma_log;
    }
    RngStream stream(6);
    const int n = 1'000'000;
    double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
    for (int i = 0; i < n; ++i) {
      const Vector v = draw_mvlognormal(stream, lch, mu_log, sigma_log);
      const double a = std::log(v[0]);
      const double b = std::log(v[1]);
      s1 += a;
      s2 += b;
      s11 += a * a;
      s22 += b * b;
      s12 += a * b;
    }
    const double cov = s12 / n - (s1 / n) * (s2 / n);
    const double va = s11 / n - (s1 / n) * (s1 / n);
    const double vb = s22 / n - (s2 / n) * (s2 / n);
    CHECK(std::abs(cov / std::sqrt(va * vb) - 0.8) <= 0.02);
  }
}
