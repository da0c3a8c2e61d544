#include "gencert/optimize.hpp"

#include <limits>

#include "gencert/error.hpp"
#include "gencert/rng.hpp"

namespace gencert {

std::vector<std::size_t> default_k_grid() { return {100, 200, 300, 400, 500, 1000, 5000, 10000}; }

std::vector<double> default_alpha_grid() {
  std::vector<double> a;
  for (int i = 1; i <= 10; ++i) a.push_back(10.0 * i);
  return a;
}

std::uint64_t partition_seed(std::uint64_t master, std::size_t K) {
  return derive_seed(master, static_cast<std::uint64_t>(K));
}

GridResult grid_search(const SampleTable& losses, const FeatureTable& features,
                       const GridOptions& options) {
  if (options.k_grid.empty() || options.alpha_grid.empty())
    throw Error(ErrorKind::parameter, "K and alpha grids must be non-empty");
  validate(losses);
  if (losses.size() == 0) throw Error(ErrorKind::invalid_input, "no samples");
  check_losses(losses.losses, options.c_sup);
  const FeatureTable rows = select_rows(features, losses.ids);

  GridResult result;
  result.bonferroni = options.bonferroni;
  result.delta_used =
      options.bonferroni
          ? options.delta / static_cast<double>(options.k_grid.size() * options.alpha_grid.size())
          : options.delta;

  const std::uint64_t n = losses.size();
  double best_bound = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t K : options.k_grid) {
    const std::uint64_t seed = partition_seed(options.seed, K);
    if (K == 0 || K > n) {
      for (double alpha : options.alpha_grid) {
        GridRow row;
        row.K = K;
        row.alpha = alpha;
        row.partition_seed = seed;
        row.reason = K == 0 ? "K must be >= 1" : "K exceeds n";
        result.table.push_back(row);
      }
      continue;
    }
    const Centroids c = fit(rows, K, seed, options.max_iters, options.threads);
    const CellCounts cc = CellCounts::from_cells(nearest_cells(rows, c, options.threads), K);
    for (double alpha : options.alpha_grid) {
      GridRow row;
      row.K = K;
      row.alpha = alpha;
      row.partition_seed = seed;
      const BoundParams p = BoundParams::from_eps_gamma(n, K, result.delta_used, alpha,
                                                        options.eps_gamma, options.c_sup);
      row.gamma = p.gamma;
      const BoundTerms t = compute_terms(cc, p);
      row.u_hat = t.u_hat;
      row.g = t.g_val;
      row.unc = t.unc;
      if (alpha > t.alpha_max) {
        row.reason = "alpha exceeds ceiling " + std::to_string(t.alpha_max);
        row.bound = mean_loss(losses.losses) + t.unc;
        result.table.push_back(row);
        continue;
      }
      BoundReport rep = certify(losses.losses, cc, p);
      row.bound = rep.bound;
      row.valid = true;
      if (!found || rep.bound < best_bound) {
        found = true;
        best_bound = rep.bound;
        result.best = std::move(rep);
        result.best_row = result.table.size();
        result.best_partition_seed = seed;
      }
      result.table.push_back(row);
    }
  }
  if (!found) throw Error(ErrorKind::validity, "no (K, alpha) pair in the grid is admissible");
  return result;
}

}  // namespace gencert
