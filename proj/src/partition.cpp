#include "gencert/partition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gencert/error.hpp"
#include "gencert/parallel.hpp"
#include "gencert/rng.hpp"

namespace gencert {
namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

void update_means(const FeatureTable& features, std::span<const std::uint32_t> cells,
                  Centroids& centroids) {
  const std::size_t K = centroids.K();
  const std::size_t d = centroids.dim;
  std::vector<double> sums(K * d, 0.0);
  std::vector<std::size_t> sizes(K, 0);
  // Fixed sample order so the reduction is schedule independent.
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto r = features.row(i);
    double* s = sums.data() + cells[i] * d;
    for (std::size_t j = 0; j < d; ++j) s[j] += r[j];
    ++sizes[cells[i]];
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (sizes[k] == 0) continue;
    auto c = centroids.row(k);
    for (std::size_t j = 0; j < d; ++j) c[j] = sums[k * d + j] / static_cast<double>(sizes[k]);
  }
}

// Moves each empty centroid onto the point farthest from its current centroid,
// taking that point only from clusters with at least two members.
void reseed_empty(const FeatureTable& features, std::vector<std::uint32_t>& cells,
                  Centroids& centroids) {
  const std::size_t K = centroids.K();
  std::vector<std::size_t> sizes(K, 0);
  for (auto c : cells) ++sizes[c];
  for (std::size_t k = 0; k < K; ++k) {
    if (sizes[k] != 0) continue;
    double best = -1.0;
    std::size_t pick = features.size();
    for (std::size_t i = 0; i < features.size(); ++i) {
      if (sizes[cells[i]] < 2) continue;
      const double dist = sq_dist(features.row(i), centroids.row(cells[i]));
      if (dist > best) {
        best = dist;
        pick = i;
      }
    }
    if (pick == features.size()) break;  // unreachable while K <= n
    auto dst = centroids.row(k);
    auto src = features.row(pick);
    std::copy(src.begin(), src.end(), dst.begin());
    --sizes[cells[pick]];
    cells[pick] = static_cast<std::uint32_t>(k);
    sizes[k] = 1;
  }
}

}  // namespace

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t K,
                                                    std::uint64_t seed) {
  if (K > n)
    throw Error(ErrorKind::invalid_input,
                "cannot draw K=" + std::to_string(K) + " distinct points from n=" + std::to_string(n));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  CounterRng rng(seed, 0x6b6d65616e73ULL);
  for (std::size_t i = 0; i < K; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(K);
  return idx;
}

std::vector<std::uint32_t> nearest_cells(const FeatureTable& features, const Centroids& centroids,
                                         unsigned threads) {
  if (features.dim != centroids.dim)
    throw Error(ErrorKind::dimension, "features have dimension " + std::to_string(features.dim) +
                                          " but centroids have " + std::to_string(centroids.dim));
  const std::size_t K = centroids.K();
  if (K == 0) throw Error(ErrorKind::invalid_input, "no centroids");
  std::vector<std::uint32_t> cells(features.size());
  parallel_for(features.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto x = features.row(i);
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t arg = 0;
      for (std::size_t k = 0; k < K; ++k) {
        const double dist = sq_dist(x, centroids.row(k));
        if (dist < best) {
          best = dist;
          arg = static_cast<std::uint32_t>(k);
        }
      }
      cells[i] = arg;
    }
  });
  return cells;
}

double within_cluster_ss(const FeatureTable& features, const Centroids& centroids,
                         std::span<const std::uint32_t> cells) {
  double s = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i)
    s += sq_dist(features.row(i), centroids.row(cells[i]));
  return s;
}

Centroids fit_from(const FeatureTable& features, Centroids centroids, std::size_t max_iters,
                   unsigned threads) {
  validate(features);
  if (max_iters < 1) throw Error(ErrorKind::parameter, "max_iters must be >= 1");
  if (centroids.dim != features.dim)
    throw Error(ErrorKind::dimension, "initial centroids do not match feature dimension");
  if (centroids.K() > features.size())
    throw Error(ErrorKind::invalid_input, "K=" + std::to_string(centroids.K()) +
                                              " exceeds n=" + std::to_string(features.size()));
  centroids.objective_trace.clear();
  centroids.iters_run = 0;

  std::vector<std::uint32_t> prev;
  for (;;) {
    auto cells = nearest_cells(features, centroids, threads);
    reseed_empty(features, cells, centroids);
    const double obj = within_cluster_ss(features, centroids, cells);
    if (!centroids.objective_trace.empty()) {
      const double last = centroids.objective_trace.back();
      if (obj > last + 1e-12 * std::max(1.0, last))
        throw std::logic_error("k-means objective increased from " + std::to_string(last) +
                               " to " + std::to_string(obj));
    }
    centroids.objective_trace.push_back(obj);
    if (cells == prev || centroids.iters_run >= max_iters) break;
    update_means(features, cells, centroids);
    ++centroids.iters_run;
    prev = std::move(cells);
  }
  return centroids;
}

Centroids fit(const FeatureTable& features, std::size_t K, std::uint64_t seed,
              std::size_t max_iters, unsigned threads) {
  validate(features);
  if (K == 0) throw Error(ErrorKind::parameter, "K must be >= 1");
  if (K > features.size())
    throw Error(ErrorKind::invalid_input,
                "K=" + std::to_string(K) + " exceeds n=" + std::to_string(features.size()));
  Centroids init;
  init.dim = features.dim;
  init.seed = seed;
  init.values.reserve(K * features.dim);
  for (std::size_t i : sample_without_replacement(features.size(), K, seed)) {
    auto r = features.row(i);
    init.values.insert(init.values.end(), r.begin(), r.end());
  }
  return fit_from(features, std::move(init), max_iters, threads);
}

Assignment assign(const FeatureTable& features, const Centroids& centroids, unsigned threads) {
  Assignment a;
  a.ids = features.ids;
  a.cells = nearest_cells(features, centroids, threads);
  return a;
}

CellCounts counts(const Assignment& assignment, std::size_t K) {
  return CellCounts::from_cells(assignment.cells, K);
}

std::vector<std::uint32_t> interval_cells(std::span<const double> xs, std::span<const double> edges) {
  if (!std::is_sorted(edges.begin(), edges.end()))
    throw Error(ErrorKind::invalid_input, "interval edges must be ascending");
  std::vector<std::uint32_t> cells(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    cells[i] = static_cast<std::uint32_t>(
        std::lower_bound(edges.begin(), edges.end(), xs[i]) - edges.begin());
  return cells;
}

}  // namespace gencert
