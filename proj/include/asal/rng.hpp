#pragma once

#include <cstdint>

#include "asal/core.hpp"

namespace asal {

/// Counter-based random stream: stateless apart from a draw counter, so the
/// sequence is fully determined by (seed, key). Streams with distinct keys are
/// statistically independent and may be used from concurrent tasks.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t key0 = 0, std::uint64_t key1 = 0,
                     std::uint64_t key2 = 0);

  /// Uniform draw in the open interval (0, 1).
  double next_uniform();

  /// Standard normal draw via the inverse CDF (reproducible across platforms).
  double next_normal();

  Vector normal_vector(int n);

  /// Uniform integer in [0, bound). Requires bound > 0.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

/// Inverse of the standard normal CDF (Wichura's AS 241, double precision).
/// Accurate to ~1e-15 for p in (0, 1).
double inverse_normal_cdf(double p);

/// Lower-triangular L with L L^T = m. Throws ConfigError on a non-positive
/// pivot (index reported in the message). Reconstruction accurate to 1e-12.
Matrix cholesky(const Matrix& m);

/// Correlated lognormal draw: z ~ N(0, I) from the stream, then
/// exp(mu_log + sigma_log .* (lch z)) componentwise.
Vector draw_mvlognormal(RngStream& stream, const Matrix& lch, const Vector& mu_log,
                        const Vector& sigma_log);

/// Moment matching for a lognormal with the given mean and standard deviation:
/// sigma_log^2 = ln(1 + (sd/mean)^2), mu_log = ln(mean) - sigma_log^2 / 2.
struct LognormalParams {
  double mu_log;
  double sigma_log;
};
LognormalParams lognormal_from_moments(double mean, double sd);

}  // namespace asal
