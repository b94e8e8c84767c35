#include "asal/problems/logistic.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "asal/rng.hpp"

namespace asal {

namespace {

// log(1 + exp(t)) without overflow.
double log1p_exp(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

// 1 / (1 + exp(-t)).
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

LogisticProblem::LogisticProblem(Dataset data, double gamma, int slack_count)
    : data_(std::move(data)), gamma_(gamma), slack_count_(slack_count) {
  if (data_.rows() == 0) throw ConfigError("logistic problem needs a nonempty dataset");
  if (!(gamma_ > 0.0)) throw ConfigError("regularization gamma must be positive");
  for (std::int64_t i = 0; i < data_.rows(); ++i) {
    if (data_.labels[i] != 1.0 && data_.labels[i] != -1.0) {
      throw ConfigError("labels must be in {-1, +1}");
    }
  }
}

std::int64_t LogisticProblem::checked_row(const SampleId& id) const {
  if (id.index >= static_cast<std::uint64_t>(data_.rows())) {
    throw std::invalid_argument("sample index " + std::to_string(id.index) +
                                " out of range for dataset of size " +
                                std::to_string(data_.rows()));
  }
  return static_cast<std::int64_t>(id.index);
}

double LogisticProblem::sample_value(const Vector& x, const SampleId& id) const {
  const std::int64_t i = checked_row(id);
  const auto w = x.head(feature_dim());
  const double margin = data_.labels[i] * data_.features.row(i).dot(w);
  return log1p_exp(-margin) + 0.5 * gamma_ * w.squaredNorm();
}

Vector LogisticProblem::sample_gradient(const Vector& x, const SampleId& id) const {
  const std::int64_t i = checked_row(id);
  const auto w = x.head(feature_dim());
  const double z = data_.labels[i];
  const double margin = z * data_.features.row(i).dot(w);
  Vector g = Vector::Zero(dimension());
  g.head(feature_dim()) =
      -z * sigmoid(-margin) * data_.features.row(i).transpose() + gamma_ * w;
  return g;
}

Vector LogisticProblem::true_gradient(const Vector& x) const {
  const auto w = x.head(feature_dim());
  Vector g = Vector::Zero(dimension());
  auto head = g.head(feature_dim());
  for (std::int64_t i = 0; i < data_.rows(); ++i) {
    const double z = data_.labels[i];
    const double margin = z * data_.features.row(i).dot(w);
    head -= z * sigmoid(-margin) * data_.features.row(i).transpose();
  }
  head /= static_cast<double>(data_.rows());
  head += gamma_ * w;
  return g;
}

double LogisticProblem::metric_objective(const Vector& x) const {
  const auto w = x.head(feature_dim());
  double total = 0.0;
  for (std::int64_t i = 0; i < data_.rows(); ++i) {
    total += log1p_exp(-data_.labels[i] * data_.features.row(i).dot(w));
  }
  return total / static_cast<double>(data_.rows()) + 0.5 * gamma_ * w.squaredNorm();
}

LogisticInstance build_logistic(Dataset dataset, std::uint64_t seed, SlabEncoding encoding) {
  if (dataset.rows() == 0) throw ConfigError("build_logistic: empty dataset");
  const auto n = dataset.cols();
  const double gamma = 1.0 / static_cast<double>(dataset.rows());
  const double b1 = 0.1;
  const double b2 = 0.02;

  RngStream stream(seed, 0x636f6e737472ULL);
  const Vector a1 = stream.normal_vector(static_cast<int>(n));
  const Vector a2 = stream.normal_vector(static_cast<int>(n));

  if (encoding == SlabEncoding::kSlabInX) {
    auto obj = std::make_shared<LogisticProblem>(std::move(dataset), gamma, 0);
    Matrix a(1, n);
    a.row(0) = a1.transpose();
    Vector b(1);
    b << b1;
    return LogisticInstance{obj, FeasibleSet::slab(a2, b2), AffineConstraint(a, b), a1, a2, b1,
                            b2};
  }

  // Slack encoding: primal (x, s1, s2), s1, s2 >= 0, three equality rows.
  auto obj = std::make_shared<LogisticProblem>(std::move(dataset), gamma, 2);
  Matrix a = Matrix::Zero(3, n + 2);
  a.row(0).head(n) = a1.transpose();
  a.row(1).head(n) = a2.transpose();
  a(1, n) = 1.0;
  a.row(2).head(n) = -a2.transpose();
  a(2, n + 1) = 1.0;
  Vector b(3);
  b << b1, b2, b2;

  const double inf = std::numeric_limits<double>::infinity();
  Vector slack_lower = Vector::Zero(2);
  Vector slack_upper = Vector::Constant(2, inf);
  FeasibleSet set = FeasibleSet::product(
      {FeasibleSet::whole_space(static_cast<int>(n)),
       FeasibleSet::box(slack_lower, slack_upper)});
  return LogisticInstance{obj, set, AffineConstraint(a, b), a1, a2, b1, b2};
}

Dataset make_synthetic_classification(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
  if (rows <= 0 || cols <= 0) throw ConfigError("synthetic dataset needs positive dimensions");
  RngStream feature_stream(seed, 0x66656174ULL);
  RngStream label_stream(seed, 0x6c61626cULL);
  Dataset d;
  d.features = Matrix(rows, cols);
  d.labels = Vector(rows);
  const Vector w = feature_stream.normal_vector(static_cast<int>(cols)) /
                   std::sqrt(static_cast<double>(cols));
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < cols; ++j) {
      d.features(i, j) = feature_stream.next_normal();
    }
    const double margin = d.features.row(i).dot(w) + 0.5 * label_stream.next_normal();
    d.labels[i] = (margin >= 0.0) ? 1.0 : -1.0;
  }
  return d;
}

}  // namespace asal
