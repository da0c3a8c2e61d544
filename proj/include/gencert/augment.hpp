#pragma once

// Certificates from transformed (augmented) copies of the training samples.
// The transform must not depend on the model; the sensitivity eps_bar_i
// measures how much the loss moves between original and transformed samples
// sharing a cell.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gencert/bound_core.hpp"
#include "gencert/tables.hpp"

namespace gencert {

/// Adds i.i.d. N(0, sigma^2) noise to every coordinate. The draw for
/// (seed, id, coordinate) is fixed, so the output does not depend on row order
/// or thread count. sigma = 0 returns the input unchanged.
FeatureTable gaussian_transform(const FeatureTable& features, double sigma, std::uint64_t seed);

struct CellPairStats {
  std::uint64_t n = 0;      // original samples in the cell
  std::uint64_t m = 0;      // transformed samples in the cell
  double eps_bar = 0.0;     // (1/(m n)) sum_{z in S_i, s in S_hat_i} |l(z) - l(s)|
  double orig_loss = 0.0;   // F(S_i, h)
  double aug_loss = 0.0;    // F(S_hat_i, h)
  bool missing_aug = false; // n > 0 and m == 0
};

struct PairStats {
  std::vector<CellPairStats> cells;
  std::uint64_t n = 0;
  std::uint64_t m = 0;         // transformed samples in occupied cells only
  double eps_bar = 0.0;
  double aug_loss = 0.0;       // F(S_hat, h) over those m samples
  std::uint64_t aug_outside_t = 0;  // transformed samples in cells empty in S
  std::vector<std::uint32_t> missing_aug_cells;
  bool approximate = false;
};

struct PairStatsOptions {
  /// Caps each side of every cell at this many samples. Profiling only: the
  /// resulting statistic is an estimate and voids the certificate.
  std::optional<std::size_t> cap_per_cell;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

PairStats pair_stats(std::span<const double> orig_losses, std::span<const std::uint32_t> orig_cells,
                     std::span<const double> aug_losses, std::span<const std::uint32_t> aug_cells,
                     std::size_t K, const PairStatsOptions& options = {});

/// True when n_i * m == m_i * n for every occupied cell (exact integer test).
bool proportions_match(const PairStats& stats);

/// F(P,h) <= eps_bar + F(S_hat,h) [+ correction] + Unc, with the same
/// confidence as certify(). Unc is computed from the original counts. The
/// correction sum_{i in T}(n_i/n - m_i/m) F(S_i,h) is added, and the report
/// flagged `corrected`, whenever the proportions differ.
BoundReport certify_aug(std::span<const double> orig_losses, std::span<const std::uint32_t> orig_cells,
                        std::span<const double> aug_losses, std::span<const std::uint32_t> aug_cells,
                        const CellCounts& counts, const BoundParams& params,
                        const PairStatsOptions& options = {});

BoundReport certify_aug(const SampleTable& orig, const Assignment& orig_assignment,
                        const SampleTable& aug, const Assignment& aug_assignment,
                        const BoundParams& params, const PairStatsOptions& options = {});

}  // namespace gencert
