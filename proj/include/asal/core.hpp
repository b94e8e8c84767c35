#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "asal/errors.hpp"

namespace asal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Throws std::invalid_argument if v contains a NaN or infinity.
void check_finite(const Vector& v, const std::string& name);
void check_finite(const Matrix& m, const std::string& name);

/// The affine equality constraint c(x) = A x - b.
struct AffineConstraint {
  Matrix a;
  Vector b;

  AffineConstraint(Matrix a_in, Vector b_in);

  int rows() const { return static_cast<int>(a.rows()); }
  int cols() const { return static_cast<int>(a.cols()); }
};

/// Current primal-dual pair together with the (outer, inner) iteration counters.
struct PrimalDualState {
  Vector x;
  Vector lambda;
  std::uint64_t outer_iter = 0;
  std::uint64_t inner_iter = 0;
};

struct ErrorPair {
  double feasibility = 0.0;
  double stationarity = 0.0;
};

/// c(x) = A x - b.
Vector constraint_value(const AffineConstraint& c, const Vector& x);

/// ||c(x)||.
double feasibility_error(const AffineConstraint& c, const Vector& x);

}  // namespace asal
