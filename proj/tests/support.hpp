#pragma once

#include <functional>

#include "asal/core.hpp"
#include "asal/rng.hpp"

namespace asal::testing {

// Spectral norm estimate by power iteration on A^T A.
inline double power_iteration_norm(const Matrix& a, std::uint64_t seed = 11, int iters = 300) {
  RngStream stream(seed, 0x706f776572ULL);
  Vector v = stream.normal_vector(static_cast<int>(a.cols()));
  v.normalize();
  double value = 0.0;
  for (int i = 0; i < iters; ++i) {
    Vector w = a.transpose() * (a * v);
    value = std::sqrt(w.norm());
    if (w.norm() == 0.0) return 0.0;
    v = w / w.norm();
  }
  return value;
}

// Central finite differences of a scalar function.
inline Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x,
                                 double step) {
  Vector g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vector hi = x, lo = x;
    hi[i] += step;
    lo[i] -= step;
    g[i] = (f(hi) - f(lo)) / (2.0 * step);
  }
  return g;
}

// Brute-force projection onto {lower <= x <= upper, <1, x> <= cap} by
// exhaustive active-set enumeration: every coordinate is pinned low, pinned
// high, or free, the cap multiplier follows from the free set, and the
// feasible candidate closest to y is the projection.
inline Vector brute_force_capped_box(const Vector& lower, const Vector& upper, double cap,
                                     const Vector& y) {
  const int n = static_cast<int>(y.size());
  const double tol = 1e-9;
  Vector best;
  double best_dist = 0.0;

  auto consider = [&](const Vector& candidate) {
    if ((candidate.array() < lower.array() - tol).any()) return;
    if ((candidate.array() > upper.array() + tol).any()) return;
    if (candidate.sum() > cap + tol * std::max(1.0, std::abs(cap))) return;
    const double dist = (candidate - y).squaredNorm();
    if (best.size() == 0 || dist < best_dist) {
      best = candidate;
      best_dist = dist;
    }
  };

  consider(y.cwiseMax(lower).cwiseMin(upper));  // cap inactive

  std::vector<int> pattern(n, 0);  // 0 = free, 1 = at lower, 2 = at upper
  const long total = static_cast<long>(std::pow(3.0, n));
  for (long code = 0; code < total; ++code) {
    long rest = code;
    int free_count = 0;
    double fixed_sum = 0.0;
    double free_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      pattern[i] = static_cast<int>(rest % 3);
      rest /= 3;
      if (pattern[i] == 0) {
        ++free_count;
        free_sum += y[i];
      } else {
        fixed_sum += (pattern[i] == 1) ? lower[i] : upper[i];
      }
    }
    if (free_count == 0) continue;
    const double mu = (free_sum + fixed_sum - cap) / free_count;
    if (mu < -tol) continue;  // cap multiplier must be nonnegative
    Vector candidate(n);
    for (int i = 0; i < n; ++i) {
      candidate[i] = (pattern[i] == 0) ? y[i] - mu : ((pattern[i] == 1) ? lower[i] : upper[i]);
    }
    consider(candidate);
  }
  return best;
}

// Brute-force slab projection: the inside point and the two hyperplane
// projections are the only candidates.
inline Vector brute_force_slab(const Vector& a, double bound, const Vector& y) {
  const double tol = 1e-9;
  Vector best;
  double best_dist = 0.0;
  auto consider = [&](const Vector& candidate) {
    if (std::abs(a.dot(candidate)) > bound + tol * (1.0 + bound)) return;
    const double dist = (candidate - y).squaredNorm();
    if (best.size() == 0 || dist < best_dist) {
      best = candidate;
      best_dist = dist;
    }
  };
  consider(y);
  consider(y - ((a.dot(y) - bound) / a.squaredNorm()) * a);
  consider(y - ((a.dot(y) + bound) / a.squaredNorm()) * a);
  return best;
}

}  // namespace asal::testing
