#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "asal/core.hpp"
#include "asal/oracle.hpp"
#include "asal/projections.hpp"

namespace asal {

/// How the budget constraint <1, x> <= C enters: as an equality with a slack
/// coordinate handled by the augmented Lagrangian (default, gives a reportable
/// feasibility error), or folded into X as a capped-box projection.
enum class TrussEncoding { kSlack, kCapInX };

/// Seven-bar truss under a random downward force: member areas x_1..x_7,
/// random lognormal yield stresses sigma_i and force f, limit state
/// g_i = f / (c_i x_i) - sigma_i, objective (1/7) E[ln sum_i exp(g_i)].
///
/// Areas are optimized in units of 10^3 mm^2 (members in [10, 50], budget
/// 150) so that gradients, curvature, and constraint values land on scales
/// where an O(1) step size is stable; use areas_mm2 to convert an iterate
/// back to mm^2. A fixed seeded pool of common random numbers provides the
/// reported (estimated) gradient and objective; it is never fed to the
/// solver.
class TrussProblem : public StochasticObjective {
 public:
  explicit TrussProblem(std::uint64_t seed, TrussEncoding encoding = TrussEncoding::kSlack,
                        int metric_pool_size = 10000);

  int dimension() const override { return encoding_ == TrussEncoding::kSlack ? 8 : 7; }
  std::optional<std::int64_t> population_size() const override { return std::nullopt; }
  bool exact_full_gradient() const override { return false; }

  double sample_value(const Vector& x, const SampleId& id) const override;
  Vector sample_gradient(const Vector& x, const SampleId& id) const override;
  Vector true_gradient(const Vector& x) const override;
  double metric_objective(const Vector& x) const override;

  TrussEncoding encoding() const { return encoding_; }

  /// Member areas in mm^2 (first 7 coordinates, descaled).
  Vector areas_mm2(const Vector& x) const;

  /// Area scale: one optimization unit is 10^3 mm^2.
  static constexpr double kAreaUnit = 1e3;

  /// Underlying-Gaussian correlation matrix of the seven yield stresses.
  static Matrix stress_correlation();

 private:
  struct Draw {
    Vector sigma;  // 7 yield stresses, N/mm^2
    double force;  // N
  };
  Draw draw_for_id(const SampleId& id) const;
  void limit_states(const Vector& x, const Draw& d, Vector& g) const;

  TrussEncoding encoding_;
  std::uint64_t seed_;
  Matrix stress_chol_;
  Vector mu_log_, sigma_log_;  // per-member lognormal parameters
  double force_mu_log_ = 0.0, force_sigma_log_ = 0.0;
  std::vector<Draw> metric_pool_;
};

struct TrussInstance {
  std::shared_ptr<TrussProblem> objective;
  FeasibleSet set;
  AffineConstraint constraint;
};

/// Assembles the constrained problem. Slack encoding: primal (x, s) with
/// X = [1,5]^7 x [0,15] and the single equality sum(x) + s = 15 (scaled
/// units). Cap-in-X encoding: primal x with X the capped box and an empty
/// constraint block.
TrussInstance build_truss(std::uint64_t seed, TrussEncoding encoding = TrussEncoding::kSlack);

}  // namespace asal
