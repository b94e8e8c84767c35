#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "asal/core.hpp"

namespace asal {

/// Identifies one realization of the random variable zeta. For finite-sum
/// problems `index` is the row index and `stream` is unused; for
/// continuous-distribution problems `stream` encodes the (outer, inner)
/// iteration pair and `index` is the draw counter within it. The same id
/// always yields the same realization.
struct SampleId {
  std::uint64_t stream = 0;
  std::uint64_t index = 0;
};

/// Mini-batch gradient aggregate. sample_variance_total is the unbiased
/// scalar (1/(|S|-1)) sum ||grad_i - mean||^2.
struct BatchStats {
  Vector mean_gradient;
  double sample_variance_total = 0.0;
  std::size_t batch_size = 0;
};

/// Stochastic objective f(x) = E[F(x, zeta)]: per-sample values/gradients,
/// batch aggregates, and a deterministic (or fixed-pool) metric gradient for
/// error reporting. Per-sample evaluations made through batch_gradient are
/// charged to the shared gradient-evaluation counter; metric evaluations are
/// not.
class StochasticObjective {
 public:
  virtual ~StochasticObjective() = default;

  virtual int dimension() const = 0;

  /// Number of samples for finite-sum problems, nullopt for continuous ones.
  virtual std::optional<std::int64_t> population_size() const = 0;

  /// True when true_gradient is exact (finite sum, or analytic expectation);
  /// false when it is a fixed-pool Monte Carlo estimate.
  virtual bool exact_full_gradient() const = 0;

  virtual double sample_value(const Vector& x, const SampleId& id) const = 0;
  virtual Vector sample_gradient(const Vector& x, const SampleId& id) const = 0;

  /// Full-data gradient (finite sum) or common-random-number estimate
  /// (continuous). Not charged to the evaluation counter.
  virtual Vector true_gradient(const Vector& x) const = 0;

  /// Objective value for reporting, on the same data as true_gradient.
  virtual double metric_objective(const Vector& x) const = 0;

  /// Mean gradient and unbiased total sample variance over the batch, summed
  /// in id order. Requires |ids| >= 2. Adds |ids| to the evaluation counter.
  BatchStats batch_gradient(const Vector& x, std::span<const SampleId> ids) const;

  /// Batch id selection: finite-sum problems sample without replacement from
  /// [0, N) (the full dataset, in order, when size >= N); continuous problems
  /// return counter-based ids keyed by (outer, inner).
  std::vector<SampleId> draw_batch(std::uint64_t seed, std::uint64_t outer, std::uint64_t inner,
                                   std::size_t size) const;

  std::uint64_t gradient_evaluations() const { return grad_evals_.load(); }
  void reset_gradient_evaluations() { grad_evals_.store(0); }

 private:
  mutable std::atomic<std::uint64_t> grad_evals_{0};
};

}  // namespace asal
