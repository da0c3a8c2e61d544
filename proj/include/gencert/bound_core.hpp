#pragma once

// Closed-form partition-based certificates on the expected loss of a fixed
// model, computed from per-sample training losses and the cell counts of a
// partition of the input space.
//
// Notation used throughout: n samples fall into K cells with counts n_i; T is
// the set of occupied cells; C is the supremum of the loss; delta is a failure
// mass; gamma >= 1 and alpha >= 0 trade bound width against the residual
// failure mass gamma^-alpha. All logarithms are natural.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gencert/tables.hpp"

namespace gencert {

/// Histogram of samples over the K cells of a partition.
struct CellCounts {
  std::vector<std::uint64_t> counts;
  std::uint64_t n = 0;
  std::vector<std::uint32_t> occupied;  // ascending indices with counts > 0

  std::size_t K() const noexcept { return counts.size(); }
  std::size_t t_size() const noexcept { return occupied.size(); }

  static CellCounts from_counts(std::vector<std::uint64_t> counts);
  /// Throws invalid_input when a cell index is >= K.
  static CellCounts from_cells(std::span<const std::uint32_t> cells, std::size_t K);
};

struct BoundParams {
  std::uint64_t n = 0;
  std::size_t K = 0;
  double delta = 0.01;
  double alpha = 100.0;
  double gamma = 1.0;
  /// gamma^-alpha; the residual failure mass of the multinomial estimate.
  double eps_gamma = 1.0;
  double c_sup = 1.0;
  /// True when gamma was derived from eps_gamma rather than supplied raw.
  bool gamma_from_eps = false;

  /// gamma = eps_gamma^(-1/alpha). Requires alpha > 0 and eps_gamma in (0, 1).
  static BoundParams from_eps_gamma(std::uint64_t n, std::size_t K, double delta, double alpha,
                                    double eps_gamma, double c_sup);
  /// Raw-gamma override; eps_gamma is recorded as gamma^-alpha.
  static BoundParams from_gamma(std::uint64_t n, std::size_t K, double delta, double alpha,
                                double gamma, double c_sup);

  /// Throws parameter on delta outside (0,1), gamma < 1, alpha < 0, C <= 0,
  /// or n, K == 0.
  void validate() const;
};

struct BoundTerms {
  double u_hat = 0.0;
  double g_val = 0.0;  // g evaluated at delta/2
  double unc = 0.0;
  double sum_sq = 0.0;
  double alpha_max = 0.0;
};

/// Inputs of the distribution-dependent bound, where the cell masses p_i are
/// known rather than estimated.
struct GeneralParams {
  std::vector<double> p;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double u = 0.0;  // sum_i gamma n p_i (1 + gamma n p_i); see general_u()
};

/// Augmented-certificate components (transformed-sample bound).
struct AugmentTerms {
  double eps_bar = 0.0;     // sum_{i in T} (m_i/m) eps_bar_i
  double aug_loss = 0.0;    // F(S_hat, h) over transformed samples in occupied cells
  double correction = 0.0;  // sum_{i in T} (n_i/n - m_i/m) F(S_i, h); 0 when proportions match
  std::uint64_t m = 0;
  std::vector<std::uint32_t> missing_aug_cells;  // occupied in S, empty in S_hat
  bool approximate = false;  // subsampled eps_bar; the certificate is void
  std::optional<double> sigma;
};

struct BoundReport {
  BoundParams params;
  BoundTerms terms;
  std::size_t t_size = 0;
  double train_loss = 0.0;
  double bound = 0.0;
  double confidence = 0.0;
  bool vacuous = false;    // bound > C; reported rather than clipped
  bool corrected = false;  // augmented bound carries the proportion correction
  std::optional<double> main_part;        // augmented runs only
  std::optional<GeneralParams> general;   // certify_general only
  std::optional<AugmentTerms> augment;    // certify_aug only
};

/// sum_i (n_i / n)^2. Lies in [1/K, 1].
double compute_sum_sq(const CellCounts& counts);

/// u_hat = gamma/(2n) + (gamma^2/2) sum_i (n_i/n)^2 + gamma^2 sqrt((2/n) ln(2K/delta)).
double compute_uhat(const CellCounts& counts, const BoundParams& params);

/// g(delta) = C (sqrt 2 + 1) sqrt(|T| ln(2K/delta) / n) + 2 C |T| ln(2K/delta) / n.
/// Callers assembling the estimated-mass certificate pass delta/2.
double compute_g(std::size_t t_size, std::size_t K, std::uint64_t n, double delta, double c_sup);

/// Largest admissible alpha: gamma n (K + gamma n) / (K (4n - 3)).
double alpha_max(std::uint64_t n, std::size_t K, double gamma);

/// All bound terms without the alpha-admissibility gate. Used to trace the
/// uncertainty as a function of alpha or K; certify() is the gated entry point.
BoundTerms compute_terms(const CellCounts& counts, const BoundParams& params);

/// Throws validity (naming the ceiling) when params.alpha > alpha_max.
void check_alpha_admissible(const BoundParams& params);

/// Arithmetic mean of the losses; 0 for an empty span.
double mean_loss(std::span<const double> losses);

/// Throws invalid_input for negative/non-finite losses and c_violation for a
/// loss above C.
void check_losses(std::span<const double> losses, double c_sup);

/// Certificate F(P,h) <= F(S,h) + C sqrt(u_hat alpha ln gamma) + g(delta/2),
/// holding with probability >= 1 - gamma^-alpha - delta.
BoundReport certify(std::span<const double> losses, const CellCounts& counts,
                    const BoundParams& params);
BoundReport certify(const SampleTable& losses, const CellCounts& counts, const BoundParams& params);

/// u = sum_i gamma n p_i (1 + gamma n p_i).
double general_u(std::span<const double> p, std::uint64_t n, double gamma);

/// Smallest admissible delta1: exp(-u ln(gamma) / (4n - 3)).
double general_delta1_floor(double u, std::uint64_t n, double gamma);

/// Distribution-dependent certificate with known cell masses:
/// F(P,h) <= F(S,h) + C sqrt(u/(2n^2) ln(1/delta1)) + g(delta2), with
/// probability >= 1 - delta1 - delta2. gp.u is recomputed from gp.p.
/// Only params.gamma and params.c_sup are used from `params`.
BoundReport certify_general(std::span<const double> losses, const CellCounts& counts,
                            GeneralParams gp, const BoundParams& params);

}  // namespace gencert
