#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gencert/bound_core.hpp"
#include "gencert/partition.hpp"
#include "gencert/tables.hpp"

namespace gencert {

struct GridOptions {
  std::vector<std::size_t> k_grid;
  std::vector<double> alpha_grid;
  double delta = 0.01;
  double eps_gamma = 0.04;
  double c_sup = 1.0;
  std::uint64_t seed = 0;
  /// Replace delta by delta / (|k_grid| * |alpha_grid|) in every evaluation.
  bool bonferroni = false;
  std::size_t max_iters = kDefaultMaxIters;
  unsigned threads = 1;
};

struct GridRow {
  std::size_t K = 0;
  double alpha = 0.0;
  double gamma = 0.0;
  double u_hat = 0.0;
  double g = 0.0;
  double unc = 0.0;
  double bound = 0.0;
  bool valid = false;
  std::string reason;             // why an invalid row was skipped
  std::uint64_t partition_seed = 0;
};

struct GridResult {
  BoundReport best;
  std::size_t best_row = 0;
  std::uint64_t best_partition_seed = 0;
  std::vector<GridRow> table;     // K-major, alpha-minor, in grid order
  double delta_used = 0.0;
  bool bonferroni = false;
};

/// K in {100, 200, 300, 400, 500, 1000, 5000, 10000}.
std::vector<std::size_t> default_k_grid();
/// alpha in {10, 20, ..., 100}.
std::vector<double> default_alpha_grid();

/// Seed of the clustering used for partition size K.
std::uint64_t partition_seed(std::uint64_t master, std::size_t K);

/// Minimizes the uncertainty over partitions (one seeded k-means per K) and
/// alpha (gamma = eps_gamma^(-1/alpha)). Pairs that fail the alpha ceiling, or
/// K > n, are kept in the table with valid = false. Throws parameter on an
/// empty grid and validity when no pair is admissible.
GridResult grid_search(const SampleTable& losses, const FeatureTable& features,
                       const GridOptions& options);

}  // namespace gencert
