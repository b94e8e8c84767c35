#include "asal/core.hpp"

#include <stdexcept>
#include <utility>

namespace asal {

void check_finite(const Vector& v, const std::string& name) {
  if (!v.allFinite()) {
    throw std::invalid_argument(name + " contains a non-finite entry");
  }
}

void check_finite(const Matrix& m, const std::string& name) {
  if (!m.allFinite()) {
    throw std::invalid_argument(name + " contains a non-finite entry");
  }
}

AffineConstraint::AffineConstraint(Matrix a_in, Vector b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  check_finite(a, "constraint matrix");
  check_finite(b, "constraint offset");
  if (a.rows() != b.size()) {
    throw std::invalid_argument("constraint matrix has " + std::to_string(a.rows()) +
                                " rows but offset has dimension " + std::to_string(b.size()));
  }
}

Vector constraint_value(const AffineConstraint& c, const Vector& x) {
  if (x.size() != c.a.cols()) {
    throw std::invalid_argument("constraint expects dimension " + std::to_string(c.a.cols()) +
                                ", got " + std::to_string(x.size()));
  }
  return c.a * x - c.b;
}

double feasibility_error(const AffineConstraint& c, const Vector& x) {
  return constraint_value(c, x).norm();
}

}  // namespace asal
