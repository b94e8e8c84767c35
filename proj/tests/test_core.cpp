#include <doctest.h>

#include <cmath>

#include "asal/core.hpp"
#include "asal/rng.hpp"
#include "support.hpp"

using namespace asal;

namespace {

AffineConstraint make_constraint(std::initializer_list<std::initializer_list<double>> rows,
                                 std::initializer_list<double> offset) {
  Matrix a(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) a(i, j++) = v;
    ++i;
  }
  Vector b(offset.size());
  int k = 0;
  for (double v : offset) b[k++] = v;
  return AffineConstraint(a, b);
}

}  // namespace

TEST_CASE("constraint_value on small examples") {
  const auto c1 = make_constraint({{1, 1}}, {1});
  Vector x = Vector::Zero(2);
  CHECK(constraint_value(c1, x)[0] == doctest::Approx(-1.0));

  const auto c2 = make_constraint({{1, 0}, {0, 1}}, {0, 0});
  x.resize(2);
  x << 3, -2;
  const Vector v = constraint_value(c2, x);
  CHECK(v[0] == doctest::Approx(3.0));
  CHECK(v[1] == doctest::Approx(-2.0));

  const auto c3 = make_constraint({{2, -1}}, {4});
  x << 3, 2;
  CHECK(constraint_value(c3, x)[0] == doctest::Approx(0.0));
}

TEST_CASE("feasibility_error") {
  const auto c = make_constraint({{1, 0}, {0, 1}}, {0, 0});
  Vector x(2);
  x << 0, 0;
  CHECK(feasibility_error(c, x) == 0.0);

  x << 3, 4;
  CHECK(feasibility_error(c, x) == doctest::Approx(5.0));

  // Random instance against an independent sum-of-squares norm.
  RngStream stream(5);
  Matrix a(3, 4);
  for (int i = 0; i < 3; ++i) a.row(i) = stream.normal_vector(4).transpose();
  const Vector b = stream.normal_vector(3);
  const AffineConstraint rc(a, b);
  const Vector y = stream.normal_vector(4);
  const Vector r = a * y - b;
  double sum_sq = 0.0;
  for (int i = 0; i < r.size(); ++i) sum_sq += r[i] * r[i];
  CHECK(feasibility_error(rc, y) == doctest::Approx(std::sqrt(sum_sq)).epsilon(1e-12));
}

TEST_CASE("constraint_value is affine") {
  RngStream stream(17);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a(2, 3);
    for (int i = 0; i < 2; ++i) a.row(i) = stream.normal_vector(3).transpose();
    const AffineConstraint c(a, stream.normal_vector(2));
    const Vector x = stream.normal_vector(3);
    const Vector y = stream.normal_vector(3);
    const double theta = stream.next_uniform();
    const Vector lhs = constraint_value(c, theta * x + (1 - theta) * y);
    const Vector rhs = theta * constraint_value(c, x) + (1 - theta) * constraint_value(c, y);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("constraint Lipschitz bound via power iteration") {
  RngStream stream(23);
  Matrix a(4, 6);
  for (int i = 0; i < 4; ++i) a.row(i) = stream.normal_vector(6).transpose();
  const AffineConstraint c(a, stream.normal_vector(4));
  const double norm_a = asal::testing::power_iteration_norm(a);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = stream.normal_vector(6);
    const Vector y = stream.normal_vector(6);
    const double lhs = (constraint_value(c, x) - constraint_value(c, y)).norm();
    CHECK(lhs <= (1.0 + 1e-9) * norm_a * (x - y).norm());
  }
}

TEST_CASE("constructors reject non-finite entries and bad dimensions") {
  Matrix a(1, 2);
  a << 1.0, std::nan("");
  Vector b(1);
  b << 0.0;
  CHECK_THROWS_AS(AffineConstraint(a, b), std::invalid_argument);

  a << 1.0, 2.0;
  Vector b2(2);
  b2 << 0.0, 0.0;
  CHECK_THROWS_AS(AffineConstraint(a, b2), std::invalid_argument);

  const AffineConstraint ok(a, b);
  Vector wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(constraint_value(ok, wrong), std::invalid_argument);
}
