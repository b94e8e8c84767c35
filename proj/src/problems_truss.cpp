#include "asal/problems/truss.hpp"

#include <cmath>

#include "asal/rng.hpp"

namespace asal {

namespace {

constexpr int kMembers = 7;
constexpr std::uint64_t kMetricPoolTag = 0x6d6574726963ULL;

// Geometry constants: c_1,2 = 1/(2 sqrt(3)), c_3..7 = 1/sqrt(3).
Vector member_constants() {
  Vector c(kMembers);
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  c[0] = c[1] = 0.5 * inv_sqrt3;
  for (int i = 2; i < kMembers; ++i) c[i] = inv_sqrt3;
  return c;
}

const Vector& members() {
  static const Vector c = member_constants();
  return c;
}

}  // namespace

Matrix TrussProblem::stress_correlation() {
  Matrix corr = Matrix::Identity(kMembers, kMembers);
  corr(0, 1) = corr(1, 0) = 0.8;
  for (int i = 0; i < 2; ++i) {
    for (int j = 2; j < kMembers; ++j) {
      corr(i, j) = corr(j, i) = 0.5;
    }
  }
  for (int i = 2; i < kMembers; ++i) {
    for (int j = 2; j < kMembers; ++j) {
      if (i != j) corr(i, j) = 0.8;
    }
  }
  return corr;
}

TrussProblem::TrussProblem(std::uint64_t seed, TrussEncoding encoding, int metric_pool_size)
    : encoding_(encoding), seed_(seed) {
  stress_chol_ = cholesky(stress_correlation());  // throws ConfigError if not PD

  mu_log_ = Vector(kMembers);
  sigma_log_ = Vector(kMembers);
  for (int i = 0; i < kMembers; ++i) {
    const double mean = (i < 2) ? 100.0 : 200.0;
    const auto p = lognormal_from_moments(mean, 0.2 * mean);
    mu_log_[i] = p.mu_log;
    sigma_log_[i] = p.sigma_log;
  }
  const auto pf = lognormal_from_moments(1e6, 4e5);  // 1000 kN mean, 400 kN SD, in N
  force_mu_log_ = pf.mu_log;
  force_sigma_log_ = pf.sigma_log;

  metric_pool_.reserve(metric_pool_size);
  for (int i = 0; i < metric_pool_size; ++i) {
    RngStream stream(seed_, kMetricPoolTag, static_cast<std::uint64_t>(i));
    Draw d;
    d.sigma = draw_mvlognormal(stream, stress_chol_, mu_log_, sigma_log_);
    d.force = std::exp(force_mu_log_ + force_sigma_log_ * stream.next_normal());
    metric_pool_.push_back(std::move(d));
  }
}

TrussProblem::Draw TrussProblem::draw_for_id(const SampleId& id) const {
  RngStream stream(seed_, id.stream, id.index);
  Draw d;
  d.sigma = draw_mvlognormal(stream, stress_chol_, mu_log_, sigma_log_);
  d.force = std::exp(force_mu_log_ + force_sigma_log_ * stream.next_normal());
  return d;
}

void TrussProblem::limit_states(const Vector& x, const Draw& d, Vector& g) const {
  g.resize(kMembers);
  for (int i = 0; i < kMembers; ++i) {
    g[i] = d.force / (members()[i] * kAreaUnit * x[i]) - d.sigma[i];
  }
}

namespace {

// Shifted for overflow safety; fills weights with softmax(g) when requested.
double log_sum_exp(const Vector& g, Vector* weights) {
  const double shift = g.maxCoeff();
  double total = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    total += std::exp(g[i] - shift);
  }
  if (weights != nullptr) {
    weights->resize(g.size());
    for (int i = 0; i < g.size(); ++i) {
      (*weights)[i] = std::exp(g[i] - shift) / total;
    }
  }
  return shift + std::log(total);
}

}  // namespace

double TrussProblem::sample_value(const Vector& x, const SampleId& id) const {
  Vector g;
  limit_states(x, draw_for_id(id), g);
  return log_sum_exp(g, nullptr) / static_cast<double>(kMembers);
}

Vector TrussProblem::sample_gradient(const Vector& x, const SampleId& id) const {
  const Draw d = draw_for_id(id);
  Vector g, w;
  limit_states(x, d, g);
  log_sum_exp(g, &w);
  Vector grad = Vector::Zero(dimension());
  for (int i = 0; i < kMembers; ++i) {
    grad[i] = -w[i] * d.force / (members()[i] * kAreaUnit * x[i] * x[i]) /
              static_cast<double>(kMembers);
  }
  return grad;
}

Vector TrussProblem::true_gradient(const Vector& x) const {
  Vector total = Vector::Zero(dimension());
  Vector g, w;
  for (const Draw& d : metric_pool_) {
    limit_states(x, d, g);
    log_sum_exp(g, &w);
    for (int i = 0; i < kMembers; ++i) {
      total[i] -= w[i] * d.force / (members()[i] * kAreaUnit * x[i] * x[i]);
    }
  }
  return total / (static_cast<double>(kMembers) * static_cast<double>(metric_pool_.size()));
}

double TrussProblem::metric_objective(const Vector& x) const {
  double total = 0.0;
  Vector g;
  for (const Draw& d : metric_pool_) {
    limit_states(x, d, g);
    total += log_sum_exp(g, nullptr);
  }
  return total / (static_cast<double>(kMembers) * static_cast<double>(metric_pool_.size()));
}

Vector TrussProblem::areas_mm2(const Vector& x) const { return kAreaUnit * x.head(kMembers); }

TrussInstance build_truss(std::uint64_t seed, TrussEncoding encoding) {
  auto obj = std::make_shared<TrussProblem>(seed, encoding);
  // Bounds 10^4 <= x <= 5*10^4 mm^2 with budget 15*10^4 mm^2, descaled by
  // the optimization unit.
  const Vector lower = Vector::Constant(kMembers, 1e4 / TrussProblem::kAreaUnit);
  const Vector upper = Vector::Constant(kMembers, 5e4 / TrussProblem::kAreaUnit);
  const double cap = 15e4 / TrussProblem::kAreaUnit;

  if (encoding == TrussEncoding::kCapInX) {
    Matrix a(0, kMembers);
    Vector b(0);
    return TrussInstance{obj, FeasibleSet::capped_box(lower, upper, cap), AffineConstraint(a, b)};
  }

  Vector box_lower(kMembers + 1), box_upper(kMembers + 1);
  box_lower.head(kMembers) = lower;
  box_upper.head(kMembers) = upper;
  box_lower[kMembers] = 0.0;
  box_upper[kMembers] = cap;  // keeps X compact
  Matrix a = Matrix::Ones(1, kMembers + 1);
  Vector b(1);
  b << cap;
  return TrussInstance{obj, FeasibleSet::box(box_lower, box_upper), AffineConstraint(a, b)};
}

}  // namespace asal
