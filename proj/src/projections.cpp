#include "asal/projections.hpp"

#include <cmath>
#include <utility>
#include <variant>

namespace asal {

namespace {

struct WholeSpace {
  int dim;
};

struct Box {
  Vector lower, upper;
};

struct Slab {
  Vector a;
  double bound;
};

struct CappedBox {
  Vector lower, upper;
  double cap;
};

struct Product {
  std::vector<FeasibleSet> parts;
  int dim;
};

void check_bounds(const Vector& lower, const Vector& upper) {
  if (lower.size() != upper.size()) {
    throw std::invalid_argument("box bounds have mismatched dimensions");
  }
  for (int i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i])) {
      throw ConfigError("box bound contains NaN at coordinate " + std::to_string(i));
    }
    if (lower[i] > upper[i]) {
      throw ConfigError("box has lower > upper at coordinate " + std::to_string(i));
    }
  }
}

}  // namespace

struct FeasibleSet::Node {
  std::variant<WholeSpace, Box, Slab, CappedBox, Product> set;
};

FeasibleSet FeasibleSet::whole_space(int dim) {
  if (dim <= 0) throw ConfigError("whole_space requires a positive dimension");
  return FeasibleSet(std::make_shared<Node>(Node{WholeSpace{dim}}));
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  check_bounds(lower, upper);
  return FeasibleSet(std::make_shared<Node>(Node{Box{std::move(lower), std::move(upper)}}));
}

FeasibleSet FeasibleSet::slab(Vector a, double bound) {
  check_finite(a, "slab normal");
  if (a.norm() == 0.0) throw ConfigError("slab normal must be nonzero");
  if (!(bound >= 0.0) || !std::isfinite(bound)) {
    throw ConfigError("slab bound must be finite and nonnegative");
  }
  return FeasibleSet(std::make_shared<Node>(Node{Slab{std::move(a), bound}}));
}

FeasibleSet FeasibleSet::capped_box(Vector lower, Vector upper, double cap) {
  check_bounds(lower, upper);
  check_finite(lower, "capped box lower bound");
  if (!std::isfinite(cap)) throw ConfigError("cap must be finite");
  if (lower.sum() > cap) {
    throw ConfigError("capped box is empty: sum of lower bounds exceeds the cap");
  }
  return FeasibleSet(
      std::make_shared<Node>(Node{CappedBox{std::move(lower), std::move(upper), cap}}));
}

FeasibleSet FeasibleSet::product(std::vector<FeasibleSet> parts) {
  if (parts.empty()) throw ConfigError("product of zero sets");
  int dim = 0;
  for (const auto& p : parts) dim += p.dim();
  return FeasibleSet(std::make_shared<Node>(Node{Product{std::move(parts), dim}}));
}

int FeasibleSet::dim() const {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, WholeSpace>) return s.dim;
        else if constexpr (std::is_same_v<T, Box>) return static_cast<int>(s.lower.size());
        else if constexpr (std::is_same_v<T, Slab>) return static_cast<int>(s.a.size());
        else if constexpr (std::is_same_v<T, CappedBox>) return static_cast<int>(s.lower.size());
        else return s.dim;
      },
      node_->set);
}

Vector FeasibleSet::project(const Vector& y) const {
  if (y.size() != dim()) {
    throw std::invalid_argument("project: point has dimension " + std::to_string(y.size()) +
                                ", set has dimension " + std::to_string(dim()));
  }
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, WholeSpace>) {
          return y;
        } else if constexpr (std::is_same_v<T, Box>) {
          return y.cwiseMax(s.lower).cwiseMin(s.upper);
        } else if constexpr (std::is_same_v<T, Slab>) {
          return project_slab(s.a, s.bound, y);
        } else if constexpr (std::is_same_v<T, CappedBox>) {
          return project_capped_box(s.lower, s.upper, s.cap, y);
        } else {
          Vector out(s.dim);
          int offset = 0;
          for (const auto& part : s.parts) {
            const int d = part.dim();
            out.segment(offset, d) = part.project(y.segment(offset, d));
            offset += d;
          }
          return out;
        }
      },
      node_->set);
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, WholeSpace>) {
          return true;
        } else if constexpr (std::is_same_v<T, Box>) {
          return (x.array() >= s.lower.array() - tol).all() &&
                 (x.array() <= s.upper.array() + tol).all();
        } else if constexpr (std::is_same_v<T, Slab>) {
          return std::abs(s.a.dot(x)) <= s.bound + tol * (1.0 + std::abs(s.bound));
        } else if constexpr (std::is_same_v<T, CappedBox>) {
          return (x.array() >= s.lower.array() - tol).all() &&
                 (x.array() <= s.upper.array() + tol).all() &&
                 x.sum() <= s.cap + tol * std::max(1.0, std::abs(s.cap));
        } else {
          int offset = 0;
          for (const auto& part : s.parts) {
            const int d = part.dim();
            if (!part.contains(x.segment(offset, d), tol)) return false;
            offset += d;
          }
          return true;
        }
      },
      node_->set);
}

Vector project_slab(const Vector& a, double bound, const Vector& y) {
  if (a.size() != y.size()) {
    throw std::invalid_argument("project_slab: dimension mismatch");
  }
  const double norm_sq = a.squaredNorm();
  if (norm_sq == 0.0) throw ConfigError("project_slab: normal must be nonzero");
  const double t = a.dot(y);
  if (std::abs(t) <= bound) return y;
  const double target = (t > 0.0) ? bound : -bound;
  return y - ((t - target) / norm_sq) * a;
}

Vector project_capped_box(const Vector& lower, const Vector& upper, double cap, const Vector& y) {
  if (lower.size() != y.size() || upper.size() != y.size()) {
    throw std::invalid_argument("project_capped_box: dimension mismatch");
  }
  if (lower.sum() > cap) {
    throw ConfigError("project_capped_box: empty feasible set");
  }
  Vector clipped = y.cwiseMax(lower).cwiseMin(upper);
  if (clipped.sum() <= cap) return clipped;

  const double tol = 1e-10 * std::max(1.0, std::abs(cap));
  double lo = 0.0;
  double hi = (y - lower).maxCoeff();
  double mu = 0.0;
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    mu = 0.5 * (lo + hi);
    clipped = (y.array() - mu).matrix().cwiseMax(lower).cwiseMin(upper);
    const double s = clipped.sum();
    if (std::abs(s - cap) <= tol) {
      converged = true;
      break;
    }
    if (s > cap) {
      lo = mu;
    } else {
      hi = mu;
    }
  }
  if (!converged) {
    throw NumericalError("project_capped_box: bisection did not converge in 200 steps");
  }

  // Newton polish on the piecewise-linear sum: lands on the exact crossing so
  // that re-projecting the result is a no-op to machine precision.
  for (int round = 0; round < 100; ++round) {
    const double s = clipped.sum();
    if (std::abs(s - cap) <= 1e-15 * std::max(1.0, std::abs(cap))) break;
    int free_count = 0;
    for (int i = 0; i < y.size(); ++i) {
      const double v = y[i] - mu;
      if (v > lower[i] && v < upper[i]) ++free_count;
    }
    if (free_count == 0) break;
    const double step = (s - cap) / free_count;
    if (step == 0.0) break;
    mu += step;
    Vector next = (y.array() - mu).matrix().cwiseMax(lower).cwiseMin(upper);
    if (std::abs(next.sum() - cap) >= std::abs(s - cap)) break;  // no progress
    clipped = std::move(next);
  }
  return clipped;
}

}  // namespace asal
