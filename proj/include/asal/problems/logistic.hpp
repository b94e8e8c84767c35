#pragma once

#include <cstdint>
#include <memory>

#include "asal/core.hpp"
#include "asal/libsvm.hpp"
#include "asal/oracle.hpp"
#include "asal/projections.hpp"

namespace asal {

/// How the two-sided disparate-impact constraint |<a2, x>| <= b2 is encoded:
/// either as two equality rows with nonnegative slacks (the multiplier sees
/// it), or as a slab inside the feasible set X.
enum class SlabEncoding { kSlack, kSlabInX };

/// Regularized logistic loss over a dense dataset, per-sample
/// F_i(x) = log(1 + exp(-z_i <x, y_i>)) + (gamma/2) ||x||^2, with the
/// regularizer replicated in every sample so the finite-sum mean equals the
/// full objective. Under slack encoding the primal is (x, s1, s2) and the
/// objective ignores the slack coordinates.
class LogisticProblem : public StochasticObjective {
 public:
  LogisticProblem(Dataset data, double gamma, int slack_count);

  int dimension() const override { return static_cast<int>(data_.cols()) + slack_count_; }
  std::optional<std::int64_t> population_size() const override { return data_.rows(); }
  bool exact_full_gradient() const override { return true; }

  double sample_value(const Vector& x, const SampleId& id) const override;
  Vector sample_gradient(const Vector& x, const SampleId& id) const override;
  Vector true_gradient(const Vector& x) const override;
  double metric_objective(const Vector& x) const override;

  const Dataset& data() const { return data_; }
  double gamma() const { return gamma_; }
  int feature_dim() const { return static_cast<int>(data_.cols()); }

 private:
  std::int64_t checked_row(const SampleId& id) const;

  Dataset data_;
  double gamma_;
  int slack_count_;
};

/// The assembled constrained problem: objective, feasible set, and the
/// affine equality constraint built from seeded a1, a2 draws.
struct LogisticInstance {
  std::shared_ptr<LogisticProblem> objective;
  FeasibleSet set;
  AffineConstraint constraint;
  Vector a1, a2;
  double b1, b2;
};

/// Builds the disparate-impact constrained problem: a1, a2 are standard
/// normal draws from the seed, b1 = 0.1, b2 = 0.02, gamma = 1/N. Slack
/// encoding produces m = 3 equalities {<a1,x> = b1, <a2,x> + s1 = b2,
/// -<a2,x> + s2 = b2} with X = R^n x [0, inf)^2; slab encoding produces the
/// single equality <a1,x> = b1 with X = Slab(a2, b2).
LogisticInstance build_logistic(Dataset dataset, std::uint64_t seed,
                                SlabEncoding encoding = SlabEncoding::kSlack);

/// Seeded synthetic classification data: standard normal features, labels
/// from a random linear rule with margin noise.
Dataset make_synthetic_classification(std::int64_t rows, std::int64_t cols, std::uint64_t seed);

}  // namespace asal
