#include <doctest.h>

#include <cmath>
#include <sstream>

#include "asal/libsvm.hpp"
#include "asal/problems/truss.hpp"
#include "asal/rng.hpp"

using namespace asal;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

}  // namespace

TEST_CASE("parse_libsvm basic grammar") {
  std::istringstream in("1 3:0.5 7:-2\n");
  const Dataset d = parse_libsvm(in);
  CHECK(d.rows() == 1);
  CHECK(d.cols() == 7);
  CHECK(d.labels[0] == 1.0);
  CHECK(d.features(0, 2) == doctest::Approx(0.5));
  CHECK(d.features(0, 6) == doctest::Approx(-2.0));
  CHECK(d.features(0, 0) == 0.0);
}

TEST_CASE("parse_libsvm empty stream") {
  std::istringstream in("");
  const Dataset d = parse_libsvm(in);
  CHECK(d.rows() == 0);
}

TEST_CASE("parse_libsvm label alphabets") {
  SUBCASE("0/1 maps 0 to -1") {
    std::istringstream in("0 1:1\n1 1:2\n");
    const Dataset d = parse_libsvm(in);
    CHECK(d.labels[0] == -1.0);
    CHECK(d.labels[1] == 1.0);
  }
  SUBCASE("1/2 maps 2 to -1") {
    std::istringstream in("2 1:1\n1 1:2\n");
    const Dataset d = parse_libsvm(in);
    CHECK(d.labels[0] == -1.0);
    CHECK(d.labels[1] == 1.0);
  }
  SUBCASE("+1/-1 kept, plus sign accepted") {
    std::istringstream in("+1 1:1\n-1 1:2\n");
    const Dataset d = parse_libsvm(in);
    CHECK(d.labels[0] == 1.0);
    CHECK(d.labels[1] == -1.0);
  }
  SUBCASE("unmappable alphabet rejected with the labels listed") {
    std::istringstream in("3 1:1\n7 1:2\n");
    CHECK_THROWS_WITH_AS(parse_libsvm(in), doctest::Contains("3"), ConfigError);
  }
}

TEST_CASE("parse_libsvm reports the offending line") {
  SUBCASE("non-numeric label") {
    std::istringstream in("1 1:1\nabc 1:1\n");
    try {
      parse_libsvm(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("non-increasing index") {
    std::istringstream in("1 1:1\n1 1:1\n1 4:1 2:9\n");
    try {
      parse_libsvm(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("malformed token") {
    std::istringstream in("1 1:1 oops\n");
    try {
      parse_libsvm(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
    }
  }
  SUBCASE("comments ignored") {
    std::istringstream in("1 1:5 # trailing note\n");
    const Dataset d = parse_libsvm(in);
    CHECK(d.features(0, 0) == doctest::Approx(5.0));
  }
}

TEST_CASE("parser round-trip through the canonical form") {
  RngStream stream(31);
  std::string text;
  for (int i = 0; i < 40; ++i) {
    text += (stream.next_uniform() < 0.5) ? "-1" : "1";
    int idx = 0;
    const int entries = 1 + static_cast<int>(stream.next_below(6));
    for (int j = 0; j < entries; ++j) {
      idx += 1 + static_cast<int>(stream.next_below(4));
      char buf[64];
      std::snprintf(buf, sizeof(buf), " %d:%.17g", idx, stream.next_normal());
      text += buf;
    }
    text += '\n';
  }
  std::istringstream in(text);
  const Dataset first = parse_libsvm(in);
  std::istringstream again(serialize_libsvm(first));
  const Dataset second = parse_libsvm(again);
  REQUIRE(second.rows() == first.rows());
  REQUIRE(second.cols() == first.cols());
  CHECK((first.features - second.features).cwiseAbs().maxCoeff() == 0.0);
  CHECK((first.labels - second.labels).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("inverse normal CDF accuracy") {
  for (double p : {1e-9, 1e-6, 1e-3, 0.2, 0.5, 0.8, 1.0 - 1e-3, 1.0 - 1e-6, 1.0 - 1e-9}) {
    const double x = inverse_normal_cdf(p);
    const double err = std::abs(normal_cdf(x) - p) / std::max(normal_pdf(x), 1e-300);
    CHECK(err <= 1e-9);
  }
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), std::invalid_argument);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), std::invalid_argument);
}

TEST_CASE("standard normal stream moments") {
  RngStream stream(7, 1, 2, 3);
  const int n = 1'000'000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = stream.next_normal();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) <= 0.01);
  CHECK(var >= 0.98);
  CHECK(var <= 1.02);
}

TEST_CASE("streams with different keys are uncorrelated") {
  RngStream s1(7, 4, 9, 0);
  RngStream s2(7, 4, 10, 0);
  const int n = 100'000;
  double sum1 = 0, sum2 = 0, sum11 = 0, sum22 = 0, sum12 = 0;
  for (int i = 0; i < n; ++i) {
    const double a = s1.next_normal();
    const double b = s2.next_normal();
    sum1 += a;
    sum2 += b;
    sum11 += a * a;
    sum22 += b * b;
    sum12 += a * b;
  }
  const double cov = sum12 / n - (sum1 / n) * (sum2 / n);
  const double v1 = sum11 / n - (sum1 / n) * (sum1 / n);
  const double v2 = sum22 / n - (sum2 / n) * (sum2 / n);
  CHECK(std::abs(cov / std::sqrt(v1 * v2)) <= 0.01);
}

TEST_CASE("same seed and key reproduce the sequence") {
  RngStream a(99, 1, 2, 3);
  RngStream b(99, 1, 2, 3);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_uniform() == b.next_uniform());
  }
}

TEST_CASE("cholesky") {
  SUBCASE("identity") {
    const Matrix l = cholesky(Matrix::Identity(3, 3));
    CHECK((l - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("2x2 correlation") {
    Matrix corr(2, 2);
    corr << 1.0, 0.8, 0.8, 1.0;
    const Matrix l = cholesky(corr);
    CHECK(l(0, 0) == doctest::Approx(1.0));
    CHECK(l(1, 0) == doctest::Approx(0.8));
    CHECK(l(1, 1) == doctest::Approx(0.6));
    CHECK((l * l.transpose() - corr).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("truss correlation matrix is positive definite") {
    const Matrix corr = TrussProblem::stress_correlation();
    const Matrix l = cholesky(corr);
    CHECK((l * l.transpose() - corr).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("non-PD rejected naming the pivot") {
    Matrix bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_WITH_AS(cholesky(bad), doctest::Contains("pivot 1"), ConfigError);
  }
}

TEST_CASE("multivariate lognormal draws") {
  SUBCASE("zero sigma is deterministic") {
    RngStream stream(3);
    Vector mu(2), sigma(2);
    mu << std::log(2.0), std::log(5.0);
    sigma << 0.0, 0.0;
    const Vector v = draw_mvlognormal(stream, Matrix::Identity(2, 2), mu, sigma);
    CHECK(v[0] == doctest::Approx(2.0));
    CHECK(v[1] == doctest::Approx(5.0));
  }
  SUBCASE("moment matching holds empirically") {
    const auto p = lognormal_from_moments(100.0, 20.0);
    CHECK(p.sigma_log * p.sigma_log == doctest::Approx(std::log(1.04)));
    CHECK(p.mu_log == doctest::Approx(std::log(100.0) - 0.5 * std::log(1.04)));
    RngStream stream(13);
    Vector mu(1), sigma(1);
    mu << p.mu_log;
    sigma << p.sigma_log;
    const int n = 1'000'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += draw_mvlognormal(stream, Matrix::Identity(1, 1), mu, sigma)[0];
    }
    CHECK(sum / n == doctest::Approx(100.0).epsilon(0.01));
  }
  SUBCASE("log-space correlation matches the target") {
    Matrix corr(2, 2);
    corr << 1.0, 0.8, 0.8, 1.0;
    const Matrix l = cholesky(corr);
    Vector mu = Vector::Zero(2);
    Vector sigma = Vector::Ones(2);
    RngStream stream(17);
    const int n = 1'000'000;
    double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
    for (int i = 0; i < n; ++i) {
      const Vector v = draw_mvlognormal(stream, l, mu, sigma);
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
