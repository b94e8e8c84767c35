#pragma once

#include <memory>
#include <vector>

#include "asal/core.hpp"

namespace asal {

/// Closed convex set with an exact Euclidean projection. Box bounds may be
/// +/-infinity; every other parameter must be finite. Immutable and cheap to
/// copy (shared internal node).
class FeasibleSet {
 public:
  /// X = R^n.
  static FeasibleSet whole_space(int dim);

  /// X = {x : lower <= x <= upper} componentwise.
  static FeasibleSet box(Vector lower, Vector upper);

  /// X = {x : |<a, x>| <= bound}, a != 0, bound >= 0.
  static FeasibleSet slab(Vector a, double bound);

  /// X = {x : lower <= x <= upper, <1, x> <= cap}. Must admit a feasible point.
  static FeasibleSet capped_box(Vector lower, Vector upper, double cap);

  /// Cartesian product; parts occupy consecutive coordinate ranges in order.
  static FeasibleSet product(std::vector<FeasibleSet> parts);

  int dim() const;
  Vector project(const Vector& y) const;
  bool contains(const Vector& x, double tol = 1e-10) const;

 private:
  struct Node;
  explicit FeasibleSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Projection onto {x : |<a, x>| <= bound} in closed form.
Vector project_slab(const Vector& a, double bound, const Vector& y);

/// Projection onto {lower <= x <= upper, <1, x> <= cap} (continuous quadratic
/// knapsack). The cap multiplier is located by bisection on
/// [0, max_i(y_i - lower_i)] until sum(clip(y - mu)) is within
/// 1e-10 * max(1, |cap|) of cap.
Vector project_capped_box(const Vector& lower, const Vector& upper, double cap, const Vector& y);

}  // namespace asal
