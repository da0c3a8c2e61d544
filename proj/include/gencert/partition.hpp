#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gencert/bound_core.hpp"
#include "gencert/tables.hpp"

namespace gencert {

/// K x d centroid matrix produced by Lloyd's k-means.
struct Centroids {
  std::size_t dim = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::size_t iters_run = 0;
  /// Within-cluster sum of squares after each assignment step.
  std::vector<double> objective_trace;

  std::size_t K() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> row(std::size_t k) const { return {values.data() + k * dim, dim}; }
  std::span<double> row(std::size_t k) { return {values.data() + k * dim, dim}; }
};

inline constexpr std::size_t kDefaultMaxIters = 50;

/// K distinct indices from [0, n), uniformly without replacement (partial
/// Fisher-Yates driven by a counter-based stream keyed on seed).
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t K, std::uint64_t seed);

/// Seeded k-means. Initial centroids are K distinct data points; Lloyd
/// iterations run until the assignment stops changing or max_iters updates.
/// A cluster that empties is re-seeded at the point farthest from its own
/// centroid. Results are bit-identical for any thread count.
Centroids fit(const FeatureTable& features, std::size_t K, std::uint64_t seed,
              std::size_t max_iters = kDefaultMaxIters, unsigned threads = 1);

/// Lloyd iterations from caller-supplied initial centroids.
Centroids fit_from(const FeatureTable& features, Centroids initial,
                   std::size_t max_iters = kDefaultMaxIters, unsigned threads = 1);

/// Nearest centroid per row (squared Euclidean); ties go to the lowest index.
std::vector<std::uint32_t> nearest_cells(const FeatureTable& features, const Centroids& centroids,
                                         unsigned threads = 1);

Assignment assign(const FeatureTable& features, const Centroids& centroids, unsigned threads = 1);

/// Histogram of an assignment over K cells.
CellCounts counts(const Assignment& assignment, std::size_t K);

double within_cluster_ss(const FeatureTable& features, const Centroids& centroids,
                         std::span<const std::uint32_t> cells);

/// Cells of a 1-D partition given ascending interior edges e_0 < ... < e_{K-2}:
/// cell i covers (e_{i-1}, e_i], with cell 0 unbounded below and cell K-1
/// unbounded above.
std::vector<std::uint32_t> interval_cells(std::span<const double> xs, std::span<const double> edges);

}  // namespace gencert
