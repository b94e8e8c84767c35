#include "asal/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace asal {

namespace {

// Stafford mix13 finalizer; full 64-bit avalanche.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t key0, std::uint64_t key1,
                     std::uint64_t key2) {
  // Fold the key words into the stream base one at a time; distinct additive
  // constants keep (seed, a, b, c) permutations from colliding.
  std::uint64_t h = kGolden;
  h = mix64(h ^ (seed + 0xa0761d6478bd642fULL));
  h = mix64(h ^ (key0 + 0xe7037ed1a0b428dbULL));
  h = mix64(h ^ (key1 + 0x8ebc6af09c88c6e3ULL));
  h = mix64(h ^ (key2 + 0x589965cc75374cc3ULL));
  base_ = h;
}

double RngStream::next_uniform() {
  const std::uint64_t word = mix64(base_ + (++counter_) * kGolden);
  return static_cast<double>(word >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

double RngStream::next_normal() { return inverse_normal_cdf(next_uniform()); }

Vector RngStream::normal_vector(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = next_normal();
  }
  return v;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("next_below requires a positive bound");
  }
  const std::uint64_t word = mix64(base_ + (++counter_) * kGolden);
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(word) * static_cast<unsigned __int128>(bound)) >> 64);
}

// Wichura (1988), algorithm AS 241, routine PPND16.
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("inverse_normal_cdf requires p in (0, 1)");
  }
  static const double a[8] = {3.3871328727963666080e0,  1.3314166789178437745e2,
                              1.9715909503065514427e3,  1.3731693765509461125e4,
                              4.5921953931549871457e4,  6.7265770927008700853e4,
                              3.3430575583588128105e4,  2.5090809287301226727e3};
  static const double b[8] = {1.0,
                              4.2313330701600911252e1,
                              6.8718700749205790830e2,
                              5.3941960214247511077e3,
                              2.1213794301586595867e4,
                              3.9307895800092710610e4,
                              2.8729085735721942674e4,
                              5.2264952788528545610e3};
  static const double c[8] = {1.42343711074968357734e0,  4.63033784615654529590e0,
                              5.76949722146069140550e0,  3.64784832476320460504e0,
                              1.27045825245236838258e0,  2.41780725177450611770e-1,
                              2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static const double d[8] = {1.0,
                              2.05319162663775882187e0,
                              1.67638483018380384940e0,
                              6.89767334985100004550e-1,
                              1.48103976427480074590e-1,
                              1.51986665636164571966e-2,
                              5.47593808499534494600e-4,
                              1.05075007164441684324e-9};
  static const double e[8] = {6.65790464350110377720e0,  5.46378491116411436990e0,
                              1.78482653991729133580e0,  2.96560571828504891230e-1,
                              2.65321895265761230930e-2, 1.24266094738807843860e-3,
                              2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const double f[8] = {1.0,
                              5.99832206555887937690e-1,
                              1.36929880922735805310e-1,
                              1.48753612908506148525e-2,
                              7.86869131145613259100e-4,
                              1.84631831751005468180e-5,
                              1.42151175831644588870e-7,
                              2.04426310338993978564e-15};

  auto ratio = [](const double* num, const double* den, double r) {
    double n = num[7];
    double m = den[7];
    for (int i = 6; i >= 0; --i) {
      n = n * r + num[i];
      m = m * r + den[i];
    }
    return n / m;
  };

  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * ratio(a, b, r);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    val = ratio(c, d, r - 1.6);
  } else {
    val = ratio(e, f, r - 5.0);
  }
  return (q < 0.0) ? -val : val;
}

Matrix cholesky(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("cholesky requires a square matrix");
  }
  const int n = static_cast<int>(m.rows());
  Matrix l = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (int k = 0; k < j; ++k) {
      pivot -= l(j, k) * l(j, k);
    }
    if (pivot <= 1e-12) {
      throw ConfigError("matrix is not positive definite: pivot " + std::to_string(j) +
                        " is " + std::to_string(pivot));
    }
    l(j, j) = std::sqrt(pivot);
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) {
        s -= l(i, k) * l(j, k);
      }
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Vector draw_mvlognormal(RngStream& stream, const Matrix& lch, const Vector& mu_log,
                        const Vector& sigma_log) {
  const int n = static_cast<int>(mu_log.size());
  if (lch.rows() != n || lch.cols() != n || sigma_log.size() != n) {
    throw std::invalid_argument("draw_mvlognormal: inconsistent dimensions");
  }
  const Vector correlated = lch * stream.normal_vector(n);
  return (mu_log.array() + sigma_log.array() * correlated.array()).exp().matrix();
}

LognormalParams lognormal_from_moments(double mean, double sd) {
  if (!(mean > 0.0) || !(sd >= 0.0)) {
    throw std::invalid_argument("lognormal moments require mean > 0 and sd >= 0");
  }
  const double sigma_sq = std::log(1.0 + (sd / mean) * (sd / mean));
  return {std::log(mean) - 0.5 * sigma_sq, std::sqrt(sigma_sq)};
}

}  // namespace asal
