#include "gencert/augment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gencert/error.hpp"
#include "gencert/parallel.hpp"
#include "gencert/rng.hpp"

namespace gencert {
namespace {

std::vector<std::vector<double>> group_by_cell(std::span<const double> losses,
                                               std::span<const std::uint32_t> cells, std::size_t K,
                                               const char* what) {
  if (losses.size() != cells.size())
    throw Error(ErrorKind::invalid_input, std::string(what) + ": losses and cells differ in length");
  std::vector<std::vector<double>> groups(K);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] >= K)
      throw Error(ErrorKind::invalid_input, std::string(what) + ": cell " +
                                                std::to_string(cells[i]) + " not below K=" +
                                                std::to_string(K));
    groups[cells[i]].push_back(losses[i]);
  }
  return groups;
}

std::vector<double> subsample(const std::vector<double>& xs, std::size_t cap, std::uint64_t key,
                              std::uint64_t stream) {
  if (xs.size() <= cap) return xs;
  std::vector<double> v = xs;
  CounterRng rng(key, stream);
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(v.size() - i));
    std::swap(v[i], v[j]);
  }
  v.resize(cap);
  return v;
}

double all_pairs_mean_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (double x : a)
    for (double y : b) s += std::abs(x - y);
  return s / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace

FeatureTable gaussian_transform(const FeatureTable& features, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw Error(ErrorKind::parameter, "sigma must be finite and >= 0");
  FeatureTable out = features;
  if (sigma == 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t key = mix_keys(seed, hash_string(out.ids[i]));
    auto r = out.row(i);
    for (std::size_t j = 0; j < out.dim; ++j) {
      CounterRng rng(key, j);
      r[j] += sigma * rng.normal();
    }
  }
  return out;
}

PairStats pair_stats(std::span<const double> orig_losses, std::span<const std::uint32_t> orig_cells,
                     std::span<const double> aug_losses, std::span<const std::uint32_t> aug_cells,
                     std::size_t K, const PairStatsOptions& options) {
  if (K == 0) throw Error(ErrorKind::parameter, "K must be >= 1");
  const auto orig = group_by_cell(orig_losses, orig_cells, K, "original samples");
  const auto aug = group_by_cell(aug_losses, aug_cells, K, "transformed samples");

  PairStats st;
  st.cells.resize(K);
  st.approximate = options.cap_per_cell.has_value();
  parallel_for(K, options.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      CellPairStats& c = st.cells[i];
      c.n = orig[i].size();
      c.m = aug[i].size();
      c.orig_loss = mean_loss(orig[i]);
      c.aug_loss = mean_loss(aug[i]);
      c.missing_aug = c.n > 0 && c.m == 0;
      if (c.n == 0 || c.m == 0) continue;
      if (options.cap_per_cell) {
        const std::size_t cap = std::max<std::size_t>(1, *options.cap_per_cell);
        c.eps_bar = all_pairs_mean_abs(subsample(orig[i], cap, options.seed, 2 * i),
                                       subsample(aug[i], cap, options.seed, 2 * i + 1));
      } else {
        c.eps_bar = all_pairs_mean_abs(orig[i], aug[i]);
      }
    }
  });

  double aug_sum = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    const CellPairStats& c = st.cells[i];
    st.n += c.n;
    if (c.n == 0) {
      st.aug_outside_t += c.m;
      continue;
    }
    st.m += c.m;
    if (c.missing_aug) st.missing_aug_cells.push_back(static_cast<std::uint32_t>(i));
  }
  // F(S_hat, h) in original sample order, restricted to occupied cells.
  for (std::size_t j = 0; j < aug_losses.size(); ++j)
    if (st.cells[aug_cells[j]].n > 0) aug_sum += aug_losses[j];
  if (st.m > 0) {
    st.aug_loss = aug_sum / static_cast<double>(st.m);
    const double m = static_cast<double>(st.m);
    for (const CellPairStats& c : st.cells)
      if (c.n > 0 && c.m > 0) st.eps_bar += static_cast<double>(c.m) / m * c.eps_bar;
  }
  return st;
}

bool proportions_match(const PairStats& stats) {
  for (const CellPairStats& c : stats.cells)
    if (c.n > 0 && c.n * stats.m != c.m * stats.n) return false;
  return true;
}

BoundReport certify_aug(std::span<const double> orig_losses, std::span<const std::uint32_t> orig_cells,
                        std::span<const double> aug_losses, std::span<const std::uint32_t> aug_cells,
                        const CellCounts& counts, const BoundParams& params,
                        const PairStatsOptions& options) {
  BoundReport r = certify(orig_losses, counts, params);
  check_losses(aug_losses, params.c_sup);
  const PairStats st = pair_stats(orig_losses, orig_cells, aug_losses, aug_cells, params.K, options);
  for (std::size_t i = 0; i < params.K; ++i)
    if (st.cells[i].n != counts.counts[i])
      throw Error(ErrorKind::invalid_input, "original cells disagree with the supplied cell counts");
  if (st.m == 0)
    throw Error(ErrorKind::invalid_input, "no transformed sample falls in an occupied cell");

  AugmentTerms a;
  a.eps_bar = st.eps_bar;
  a.aug_loss = st.aug_loss;
  a.m = st.m;
  a.missing_aug_cells = st.missing_aug_cells;
  a.approximate = st.approximate;

  double main_part = a.eps_bar + a.aug_loss;
  if (!proportions_match(st)) {
    const double n = static_cast<double>(st.n);
    const double m = static_cast<double>(st.m);
    for (const CellPairStats& c : st.cells)
      if (c.n > 0)
        a.correction += (static_cast<double>(c.n) / n - static_cast<double>(c.m) / m) * c.orig_loss;
    main_part += a.correction;
    r.corrected = true;
  }
  r.main_part = main_part;
  r.bound = main_part + r.terms.unc;
  r.vacuous = r.bound > params.c_sup;
  r.augment = std::move(a);
  return r;
}

BoundReport certify_aug(const SampleTable& orig, const Assignment& orig_assignment,
                        const SampleTable& aug, const Assignment& aug_assignment,
                        const BoundParams& params, const PairStatsOptions& options) {
  validate(orig);
  validate(aug);
  const auto orig_cells = cells_for(orig, orig_assignment);
  const auto aug_cells = cells_for(aug, aug_assignment);
  const CellCounts c = CellCounts::from_cells(orig_cells, params.K);
  return certify_aug(orig.losses, orig_cells, aug.losses, aug_cells, c, params, options);
}

}  // namespace gencert
