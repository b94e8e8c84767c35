#include "asal/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "asal/rng.hpp"

namespace asal {

BatchStats StochasticObjective::batch_gradient(const Vector& x,
                                               std::span<const SampleId> ids) const {
  if (ids.size() < 2) {
    throw std::invalid_argument("batch_gradient requires at least 2 samples");
  }
  std::vector<Vector> grads;
  grads.reserve(ids.size());
  Vector sum = Vector::Zero(dimension());
  for (const SampleId& id : ids) {
    grads.push_back(sample_gradient(x, id));
    sum += grads.back();
  }
  grad_evals_.fetch_add(ids.size());

  BatchStats stats;
  stats.batch_size = ids.size();
  stats.mean_gradient = sum / static_cast<double>(ids.size());
  double sq = 0.0;
  for (const Vector& g : grads) {
    sq += (g - stats.mean_gradient).squaredNorm();
  }
  stats.sample_variance_total = sq / static_cast<double>(ids.size() - 1);
  return stats;
}

std::vector<SampleId> StochasticObjective::draw_batch(std::uint64_t seed, std::uint64_t outer,
                                                      std::uint64_t inner,
                                                      std::size_t size) const {
  std::vector<SampleId> ids;
  const auto population = population_size();
  if (!population.has_value()) {
    // Continuous distribution: counter-based ids, one fresh stream per (k, t).
    const std::uint64_t stream = (outer << 20) | inner;
    ids.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
      ids.push_back(SampleId{stream, i});
    }
    return ids;
  }

  const auto n = static_cast<std::uint64_t>(*population);
  if (size >= n) {
    ids.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) ids.push_back(SampleId{0, i});
    return ids;
  }
  // Partial Fisher-Yates, then sorted for a fixed summation order.
  RngStream stream(seed, 0x6261746368ULL, outer, inner);
  std::vector<std::uint64_t> pool(n);
  for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
  ids.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    const std::uint64_t j = i + stream.next_below(n - i);
    std::swap(pool[i], pool[j]);
    ids.push_back(SampleId{0, pool[i]});
  }
  std::sort(ids.begin(), ids.end(),
            [](const SampleId& a, const SampleId& b) { return a.index < b.index; });
  return ids;
}

}  // namespace asal
