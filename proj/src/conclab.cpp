#include "gencert/conclab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "gencert/bound_core.hpp"
#include "gencert/error.hpp"
#include "gencert/parallel.hpp"
#include "gencert/rng.hpp"

namespace gencert::conclab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kTrialBlock = 2048;
constexpr std::uint64_t kMaxOutcomes = 1u << 22;

// Neumaier-compensated accumulator in extended precision.
class ExactSum {
 public:
  void add(long double x) {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string vec(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "|" : "") + num(v[i]);
  return s;
}

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct Moments {
  double sum = 0.0;
  double sumsq = 0.0;
};

// Mean of f over `trials` counter-seeded trials; blocks fix the summation order.
template <class F>
MeanEstimate mc_mean(std::size_t trials, std::uint64_t seed, unsigned threads, F&& f) {
  if (trials < 2) throw Error(ErrorKind::parameter, "Monte-Carlo mode needs at least 2 trials");
  const Moments m = block_reduce(
      trials, kTrialBlock, threads, Moments{},
      [&](std::size_t b, std::size_t e) {
        Moments acc;
        for (std::size_t t = b; t < e; ++t) {
          CounterRng rng(seed, t);
          const double x = f(rng);
          acc.sum += x;
          acc.sumsq += x * x;
        }
        return acc;
      },
      [](Moments a, const Moments& b) {
        a.sum += b.sum;
        a.sumsq += b.sumsq;
        return a;
      });
  const double n = static_cast<double>(trials);
  MeanEstimate est;
  est.mean = m.sum / n;
  const double var = std::max(0.0, (m.sumsq - n * est.mean * est.mean) / (n - 1.0));
  est.stderr_ = std::sqrt(var / n);
  return est;
}

// Frequency of each of `events` indicator slots over trials.
template <class F>
std::vector<double> mc_frequencies(std::size_t trials, std::uint64_t seed, unsigned threads,
                                   std::size_t events, F&& f) {
  if (trials < 1) throw Error(ErrorKind::parameter, "Monte-Carlo mode needs trials >= 1");
  using Counts = std::vector<std::uint64_t>;
  const Counts hits = block_reduce(
      trials, kTrialBlock, threads, Counts(events, 0),
      [&](std::size_t b, std::size_t e) {
        Counts acc(events, 0);
        for (std::size_t t = b; t < e; ++t) {
          CounterRng rng(seed, t);
          f(rng, acc);
        }
        return acc;
      },
      [](Counts a, const Counts& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
      });
  std::vector<double> freq(events);
  for (std::size_t i = 0; i < events; ++i)
    freq[i] = static_cast<double>(hits[i]) / static_cast<double>(trials);
  return freq;
}

double sample(const DiscreteDist& d, CounterRng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < d.probs.size(); ++i) {
    cum += d.probs[i];
    if (u < cum) return d.values[i];
  }
  return d.values.back();
}

std::size_t sample_index(const std::vector<double>& probs, CounterRng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.size() - 1;
}

void check_probs(const std::vector<double>& probs, const char* what) {
  if (probs.empty()) throw Error(ErrorKind::invalid_input, std::string(what) + ": empty law");
  double s = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw Error(ErrorKind::invalid_input, std::string(what) + ": negative mass");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-12)
    throw Error(ErrorKind::invalid_input, std::string(what) + ": masses sum to " + num(s));
}

// C(n, k); exact while the intermediate products stay below 2^64.
long double binom_coef(std::size_t n, std::size_t k) {
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return c;
}

long double int_pow(long double x, std::size_t k) {
  long double r = 1.0L;
  for (; k; k >>= 1, x *= x)
    if (k & 1) r *= x;
  return r;
}

long double binom_pmf(std::size_t n, double p, std::size_t k) {
  const long double pl = p;
  return binom_coef(n, k) * int_pow(pl, k) * int_pow(1.0L - pl, n - k);
}

// Calls visit(counts) for every composition of n into `cells` non-negative parts.
void for_each_composition(std::size_t n, std::size_t cells,
                          const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> c(cells, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == cells) {
      c[i] = left;
      visit(c);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      c[i] = k;
      rec(i + 1, left - k);
    }
  };
  if (cells == 0) return;
  rec(0, n);
}

// Masses in extended precision with the last one completing the total to 1, so
// rounding in the inputs cannot push a total probability above 1.
std::vector<long double> exact_masses(const std::vector<double>& p) {
  std::vector<long double> out(p.begin(), p.end());
  long double head = 0.0L;
  for (std::size_t i = 0; i + 1 < out.size(); ++i) head += out[i];
  if (!out.empty()) out.back() = std::max(0.0L, 1.0L - head);
  return out;
}

long double multinomial_pmf(const std::vector<std::size_t>& counts, const std::vector<long double>& p) {
  long double pmf = 1.0L;
  std::size_t total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (p[i] == 0.0L) return 0.0L;
    total += counts[i];
    pmf *= binom_coef(total, counts[i]) * int_pow(p[i], counts[i]);
  }
  return pmf;
}

std::uint64_t compositions_count(std::size_t n, std::size_t cells) {
  // C(n + cells - 1, cells - 1), saturating.
  long double c = 1.0L;
  for (std::size_t i = 1; i < cells; ++i) c = c * static_cast<long double>(n + i) / i;
  return c > 1e18L ? ~std::uint64_t{0} : static_cast<std::uint64_t>(std::llround(c));
}

void sample_multinomial(std::size_t n, const std::vector<double>& p, CounterRng& rng,
                        std::vector<std::size_t>& out) {
  std::fill(out.begin(), out.end(), 0);
  for (std::size_t s = 0; s < n; ++s) ++out[sample_index(p, rng)];
}

bool decide(bool exact, double estimate, double bound, double slack) {
  return exact ? estimate <= bound : estimate <= bound + slack;
}

}  // namespace

// ---------------------------------------------------------------------------

DiscreteDist DiscreteDist::bernoulli(double p) { return {{0.0, 1.0}, {1.0 - p, p}}; }
DiscreteDist DiscreteDist::point(double v) { return {{v}, {1.0}}; }

double DiscreteDist::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probs[i];
  return m;
}

void DiscreteDist::validate() const {
  if (values.size() != probs.size())
    throw Error(ErrorKind::invalid_input, "law values and masses differ in length");
  check_probs(probs, "discrete law");
  for (double v : values)
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::invalid_input, "law support must lie in [0, 1]");
}

// ---------------------------------------------------------------------------

double mgf_lambda_ceiling(std::size_t n, double nu, double c, bool extended_range) {
  if (c * nu >= 1.0) return kInf;
  const double base = std::log(c) / (4.0 * static_cast<double>(n) - 3.0);
  return extended_range ? base / (1.0 - c * nu) : base;
}

CheckResult mgf_square_check(const MgfCheckSpec& spec) {
  if (spec.n == 0) throw Error(ErrorKind::parameter, "n must be >= 1");
  if (!(spec.nu >= 0.0 && spec.nu <= 1.0)) throw Error(ErrorKind::parameter, "nu must lie in [0, 1]");
  if (!(spec.c >= 1.0)) throw Error(ErrorKind::parameter, "c must be >= 1");
  const bool large = spec.c * spec.nu >= 1.0;
  const double ceiling = mgf_lambda_ceiling(spec.n, spec.nu, spec.c, spec.extended_range);
  if (!(spec.lambda >= 0.0) || spec.lambda > ceiling)
    throw Error(ErrorKind::range,
                "lambda=" + num(spec.lambda) +
                    (large ? " must be >= 0 in the large-mean regime (c*nu >= 1)"
                           : " outside [0, " + num(ceiling) + "] of the small-mean regime (c*nu < 1)"));

  std::vector<DiscreteDist> vars = spec.variables;
  if (vars.empty()) vars.assign(spec.n, DiscreteDist::bernoulli(spec.nu));
  if (vars.size() != spec.n) throw Error(ErrorKind::invalid_input, "need exactly n variable laws");
  bool iid_bernoulli = true;
  std::uint64_t outcomes = 1;
  for (const auto& v : vars) {
    v.validate();
    if (v.mean() > spec.nu + 1e-15)
      throw Error(ErrorKind::invalid_input, "a variable's mean exceeds nu");
    iid_bernoulli = iid_bernoulli && v.values == std::vector<double>{0.0, 1.0} &&
                    v.probs == vars.front().probs;
    outcomes = outcomes > kMaxOutcomes ? outcomes : outcomes * v.values.size();
  }
  const bool enumerable = spec.n <= 20 && outcomes <= kMaxOutcomes;
  const bool exact = spec.mode == Mode::exact || (spec.mode == Mode::automatic && enumerable);
  if (exact && !enumerable)
    throw Error(ErrorKind::invalid_input, "configuration too large for exact enumeration");

  const double cnv = spec.c * static_cast<double>(spec.n) * spec.nu;
  CheckResult r;
  r.check = spec.variables.empty() ? "square_mgf_binomial" : "square_mgf_bounded";
  r.params = "n=" + std::to_string(spec.n) + ";nu=" + num(spec.nu) + ";c=" + num(spec.c) +
             ";lambda=" + num(spec.lambda) + (large ? ";regime=large_mean" : ";regime=small_mean") +
             (spec.extended_range ? ";range=extended" : "");
  r.bound = std::exp(spec.lambda * cnv * (1.0 + cnv));
  r.exact = exact;

  if (exact) {
    ExactSum acc;
    const long double lambda = spec.lambda;
    if (iid_bernoulli) {
      // Enumerate all 2^n outcomes; the weight depends only on the popcount.
      const long double p = vars.front().probs[1];
      std::vector<long double> w(spec.n + 1);
      for (std::size_t k = 0; k <= spec.n; ++k) {
        const long double kk = static_cast<long double>(k);
        w[k] = (k == 0 ? 1.0L : std::pow(p, kk)) *
               (k == spec.n ? 1.0L : std::pow(1.0L - p, static_cast<long double>(spec.n) - kk)) *
               std::exp(lambda * kk * kk);
      }
      const std::uint64_t total = std::uint64_t{1} << spec.n;
      for (std::uint64_t mask = 0; mask < total; ++mask) acc.add(w[std::popcount(mask)]);
    } else {
      std::vector<std::vector<long double>> masses;
      for (const auto& v : vars) masses.push_back(exact_masses(v.probs));
      std::vector<std::size_t> idx(spec.n, 0);
      for (;;) {
        long double prob = 1.0L, y = 0.0L;
        for (std::size_t i = 0; i < spec.n; ++i) {
          prob *= masses[i][idx[i]];
          y += vars[i].values[idx[i]];
        }
        acc.add(prob * std::exp(lambda * y * y));
        std::size_t i = 0;
        while (i < spec.n && ++idx[i] == vars[i].values.size()) idx[i++] = 0;
        if (i == spec.n) break;
      }
    }
    r.estimate = static_cast<double>(acc.value());
  } else {
    const auto est = mc_mean(spec.trials, spec.seed, spec.threads, [&](CounterRng& rng) {
      double y = 0.0;
      for (const auto& v : vars) y += sample(v, rng);
      return std::exp(spec.lambda * y * y);
    });
    r.estimate = est.mean;
    r.slack = r.estimate > 0.0 ? r.bound * 3.0 * est.stderr_ / r.estimate : 0.0;
    r.params += ";trials=" + std::to_string(spec.trials) + ";stderr=" + num(est.stderr_);
  }
  r.margin = r.bound - r.estimate;
  r.pass = decide(exact, r.estimate, r.bound, r.slack);
  return r;
}

// ---------------------------------------------------------------------------

LatticeLoss LatticeLoss::bernoulli(double q) { return {1, {1.0 - q, q}}; }

LatticeLoss LatticeLoss::constant(unsigned k, unsigned levels) {
  LatticeLoss l{levels, std::vector<double>(levels + 1, 0.0)};
  l.probs.at(k) = 1.0;
  return l;
}

double LatticeLoss::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) m += probs[k] * (static_cast<double>(k) / levels);
  return m;
}

void LatticeLoss::validate() const {
  if (levels == 0 || probs.size() != levels + 1)
    throw Error(ErrorKind::invalid_input, "lattice loss needs L >= 1 and L + 1 masses");
  check_probs(probs, "lattice loss");
}

LatentModel LatentModel::standard(std::size_t m) {
  LatentModel lm;
  lm.weights = {0.5, 0.5};
  lm.cells.resize(2);
  for (std::size_t i = 0; i < m; ++i) {
    lm.cells[0].push_back(LatticeLoss::bernoulli(0.5));
    const double q = m == 1 ? 0.3 : 0.2 + 0.6 * static_cast<double>(i) / static_cast<double>(m - 1);
    lm.cells[1].push_back(LatticeLoss::bernoulli(q));
  }
  return lm;
}

LatentModel LatentModel::degenerate(std::size_t m) {
  LatentModel lm;
  lm.weights = {1.0};
  lm.cells.assign(1, std::vector<LatticeLoss>(m, LatticeLoss::constant(1, 2)));
  return lm;
}

double tail_u(const std::vector<double>& mu, std::size_t n, double gamma) {
  return general_u(mu, n, gamma);
}

double tail_t_max(const TailCheckSpec& spec) {
  const double mu_min = spec.mu.empty() ? 0.0 : *std::min_element(spec.mu.begin(), spec.mu.end());
  const bool large = spec.gamma * mu_min >= 1.0;
  const double u = tail_u(spec.mu, spec.n, spec.gamma);
  const double n = static_cast<double>(spec.n);
  switch (spec.regime) {
    case TailRegime::unified:
      return large ? kInf : u * std::sqrt(std::log(spec.gamma) / (8.0 * n - 6.0));
    case TailRegime::small_gamma:
      return u * std::sqrt(std::log(spec.gamma) / (2.0 * (1.0 - spec.gamma * mu_min) * (4.0 * n - 3.0)));
    case TailRegime::large_gamma:
      return kInf;
  }
  return 0.0;
}

TailCheckResult hoeffding_conditional_check(const TailCheckSpec& spec_in) {
  TailCheckSpec spec = spec_in;
  if (spec.n == 0 || spec.m == 0) throw Error(ErrorKind::parameter, "m and n must be >= 1");
  if (spec.mu.size() != spec.m) throw Error(ErrorKind::invalid_input, "mu must have m entries");
  if (!(spec.gamma >= 1.0)) throw Error(ErrorKind::parameter, "gamma must be >= 1");
  double mu_sum = 0.0;
  for (double v : spec.mu) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::invalid_input, "mu_i must lie in [0, 1]");
    mu_sum += v;
  }
  if (spec.counts == CountModel::multinomial && mu_sum > 1.0 + 1e-12)
    throw Error(ErrorKind::invalid_input, "multinomial cell masses exceed 1");
  if (spec.latent.weights.empty()) spec.latent = LatentModel::standard(spec.m);
  check_probs(spec.latent.weights, "latent weights");
  if (spec.latent.cells.size() != spec.latent.weights.size())
    throw Error(ErrorKind::invalid_input, "latent model needs one cell-law row per state");
  const unsigned L = spec.latent.cells.front().empty() ? 1 : spec.latent.cells.front().front().levels;
  for (const auto& row : spec.latent.cells) {
    if (row.size() != spec.m) throw Error(ErrorKind::invalid_input, "latent row needs m cell laws");
    for (const auto& l : row) {
      l.validate();
      if (l.levels != L) throw Error(ErrorKind::invalid_input, "lattice levels must agree");
    }
  }

  const double mu_min = *std::min_element(spec.mu.begin(), spec.mu.end());
  if (spec.regime == TailRegime::small_gamma && !(spec.gamma * mu_min < 1.0))
    throw Error(ErrorKind::range, "small-gamma regime needs gamma * mu_min < 1");
  if (spec.regime == TailRegime::large_gamma && !(spec.gamma * mu_min >= 1.0))
    throw Error(ErrorKind::range, "large-gamma regime needs gamma * mu_min >= 1");

  TailCheckResult res;
  res.u = tail_u(spec.mu, spec.n, spec.gamma);
  res.t_max = tail_t_max(spec);
  for (double t : spec.t_grid)
    if (!(t >= 0.0) || t > res.t_max)
      throw Error(ErrorKind::range, "t=" + num(t) + " outside the admissible range [0, " +
                                        num(res.t_max) + "]");

  const std::size_t H = spec.latent.weights.size();
  const std::size_t T = spec.t_grid.size();
  std::vector<double> rest_mu = spec.mu;
  rest_mu.push_back(std::max(0.0, 1.0 - mu_sum));

  const std::uint64_t configs =
      spec.counts == CountModel::independent_binomial
          ? static_cast<std::uint64_t>(std::pow(static_cast<double>(spec.n + 1), spec.m))
          : compositions_count(spec.n, spec.m + 1);
  const bool enumerable = configs <= 200000 && spec.n * L <= 400;
  const bool exact = spec.mode == Mode::exact || (spec.mode == Mode::automatic && enumerable);
  if (exact && !enumerable)
    throw Error(ErrorKind::invalid_input, "configuration too large for exact enumeration");
  res.exact = exact;

  std::vector<double> upper(T, 0.0), lower(T, 0.0);
  if (exact) {
    // powers[h][i][k]: law of the lattice sum of k i.i.d. losses of cell i under h.
    std::vector<std::vector<std::vector<std::vector<long double>>>> powers(
        H, std::vector<std::vector<std::vector<long double>>>(spec.m));
    for (std::size_t h = 0; h < H; ++h)
      for (std::size_t i = 0; i < spec.m; ++i) {
        const auto law = exact_masses(spec.latent.cells[h][i].probs);
        auto& pw = powers[h][i];
        pw.push_back({1.0L});
        for (std::size_t k = 1; k <= spec.n; ++k) {
          std::vector<long double> next(pw.back().size() + L, 0.0L);
          for (std::size_t a = 0; a < pw.back().size(); ++a)
            for (std::size_t b = 0; b <= L; ++b) next[a + b] += pw.back()[a] * law[b];
          pw.push_back(std::move(next));
        }
      }
    const std::vector<long double> weights = exact_masses(spec.latent.weights);
    std::vector<ExactSum> up(T), lo(T);
    auto visit = [&](const std::vector<std::size_t>& v, long double pv) {
      if (pv == 0.0L) return;
      for (std::size_t h = 0; h < H; ++h) {
        const long double w = pv * weights[h];
        if (w == 0.0L) continue;
        std::vector<long double> dist{1.0L};
        double e = 0.0;
        for (std::size_t i = 0; i < spec.m; ++i) {
          const auto& f = powers[h][i][v[i]];
          std::vector<long double> next(dist.size() + f.size() - 1, 0.0L);
          for (std::size_t a = 0; a < dist.size(); ++a)
            if (dist[a] != 0.0L)
              for (std::size_t b = 0; b < f.size(); ++b) next[a + b] += dist[a] * f[b];
          dist = std::move(next);
          e += static_cast<double>(v[i]) * spec.latent.cells[h][i].mean();
        }
        for (std::size_t s = 0; s < dist.size(); ++s) {
          if (dist[s] == 0.0L) continue;
          const double d = static_cast<double>(s) / L - e;
          for (std::size_t j = 0; j < T; ++j) {
            if (d >= spec.t_grid[j]) up[j].add(w * dist[s]);
            if (-d >= spec.t_grid[j]) lo[j].add(w * dist[s]);
          }
        }
      }
    };
    if (spec.counts == CountModel::independent_binomial) {
      std::vector<std::vector<long double>> pmf(spec.m);
      for (std::size_t i = 0; i < spec.m; ++i)
        for (std::size_t k = 0; k <= spec.n; ++k) pmf[i].push_back(binom_pmf(spec.n, spec.mu[i], k));
      std::vector<std::size_t> v(spec.m, 0);
      for (;;) {
        long double pv = 1.0L;
        for (std::size_t i = 0; i < spec.m; ++i) pv *= pmf[i][v[i]];
        visit(v, pv);
        std::size_t i = 0;
        while (i < spec.m && ++v[i] > spec.n) v[i++] = 0;
        if (i == spec.m) break;
      }
    } else {
      std::vector<long double> cell_mass(spec.mu.begin(), spec.mu.end());
      long double used = 0.0L;
      for (long double v : cell_mass) used += v;
      cell_mass.push_back(std::max(0.0L, 1.0L - used));
      for_each_composition(spec.n, spec.m + 1, [&](const std::vector<std::size_t>& c) {
        visit(c, multinomial_pmf(c, cell_mass));
      });
    }
    for (std::size_t j = 0; j < T; ++j) {
      upper[j] = static_cast<double>(up[j].value());
      lower[j] = static_cast<double>(lo[j].value());
    }
  } else {
    const auto freq = mc_frequencies(
        spec.trials, spec.seed, spec.threads, 2 * T, [&](CounterRng& rng, std::vector<std::uint64_t>& hits) {
          std::vector<std::size_t> v(spec.m + 1, 0);
          if (spec.counts == CountModel::independent_binomial) {
            for (std::size_t i = 0; i < spec.m; ++i)
              v[i] = rng.binomial(static_cast<unsigned>(spec.n), spec.mu[i]);
          } else {
            sample_multinomial(spec.n, rest_mu, rng, v);
          }
          const std::size_t h = sample_index(spec.latent.weights, rng);
          std::size_t s = 0;
          double e = 0.0;
          for (std::size_t i = 0; i < spec.m; ++i) {
            const auto& law = spec.latent.cells[h][i];
            for (std::size_t k = 0; k < v[i]; ++k) s += sample_index(law.probs, rng);
            e += static_cast<double>(v[i]) * law.mean();
          }
          const double d = static_cast<double>(s) / L - e;
          for (std::size_t j = 0; j < T; ++j) {
            if (d >= spec.t_grid[j]) ++hits[j];
            if (-d >= spec.t_grid[j]) ++hits[T + j];
          }
        });
    for (std::size_t j = 0; j < T; ++j) {
      upper[j] = freq[j];
      lower[j] = freq[T + j];
    }
  }

  res.pass = true;
  for (std::size_t j = 0; j < T; ++j) {
    TailPoint p;
    p.t = spec.t_grid[j];
    p.upper_tail = upper[j];
    p.lower_tail = lower[j];
    p.bound = std::exp(-2.0 * p.t * p.t / res.u);
    p.slack = exact ? 0.0
                    : 3.0 * std::sqrt(p.bound * (1.0 - p.bound) / static_cast<double>(spec.trials));
    p.pass = decide(exact, p.upper_tail, p.bound, p.slack) &&
             decide(exact, p.lower_tail, p.bound, p.slack);
    res.pass = res.pass && p.pass;
    res.points.push_back(p);
  }
  return res;
}

std::vector<CheckResult> tail_rows(const TailCheckSpec& spec, const TailCheckResult& result) {
  const char* model = spec.counts == CountModel::independent_binomial ? "independent" : "multinomial";
  const char* regime = spec.regime == TailRegime::unified       ? "unified"
                       : spec.regime == TailRegime::small_gamma ? "small_gamma"
                                                                : "large_gamma";
  std::vector<CheckResult> rows;
  for (const TailPoint& p : result.points) {
    for (int side = 0; side < 2; ++side) {
      CheckResult r;
      r.check = side == 0 ? "conditional_tail_upper" : "conditional_tail_lower";
      r.params = std::string("counts=") + model + ";regime=" + regime + ";m=" +
                 std::to_string(spec.m) + ";n=" + std::to_string(spec.n) + ";mu=" + vec(spec.mu) +
                 ";gamma=" + num(spec.gamma) + ";t=" + num(p.t) + ";u=" + num(result.u) +
                 (result.exact ? "" : ";trials=" + std::to_string(spec.trials));
      r.estimate = side == 0 ? p.upper_tail : p.lower_tail;
      r.bound = p.bound;
      r.margin = r.bound - r.estimate;
      r.slack = p.slack;
      r.exact = result.exact;
      r.pass = decide(result.exact, r.estimate, r.bound, r.slack);
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

double BoundedLaw::mean() const {
  if (kind == Kind::uniform) return 0.5 * (lo + hi);
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probs[i];
  return m;
}

std::vector<CheckResult> hoeffding_lemma_conditional_check(const ConditionalSpec& spec) {
  if (!(spec.b >= spec.a)) throw Error(ErrorKind::parameter, "need a <= b");
  if (spec.x_given_y.empty()) throw Error(ErrorKind::invalid_input, "no conditional laws");
  for (const auto& law : spec.x_given_y) {
    if (law.kind == BoundedLaw::Kind::discrete) {
      if (law.values.size() != law.probs.size())
        throw Error(ErrorKind::invalid_input, "law values and masses differ in length");
      check_probs(law.probs, "conditional law");
      for (double v : law.values)
        if (v < spec.a || v > spec.b) throw Error(ErrorKind::invalid_input, "support leaves [a, b]");
    } else if (!(law.lo >= spec.a && law.hi <= spec.b && law.lo <= law.hi)) {
      throw Error(ErrorKind::invalid_input, "uniform law leaves [a, b]");
    }
  }
  const bool exact = spec.mode != Mode::monte_carlo;
  const double width = spec.b - spec.a;
  std::vector<CheckResult> rows;
  for (std::size_t y = 0; y < spec.x_given_y.size(); ++y) {
    const BoundedLaw& law = spec.x_given_y[y];
    const double mean = law.mean();
    for (std::size_t li = 0; li < spec.lambda_grid.size(); ++li) {
      const double lambda = spec.lambda_grid[li];
      CheckResult r;
      r.check = "conditional_hoeffding_lemma";
      r.params = "a=" + num(spec.a) + ";b=" + num(spec.b) + ";y=" + std::to_string(y) +
                 (law.kind == BoundedLaw::Kind::uniform ? ";law=uniform" : ";law=discrete") +
                 ";lambda=" + num(lambda);
      r.bound = std::exp(lambda * lambda * width * width / 8.0);
      r.exact = exact;
      if (exact) {
        if (law.kind == BoundedLaw::Kind::discrete) {
          ExactSum acc;
          const auto masses = exact_masses(law.probs);
          for (std::size_t k = 0; k < law.values.size(); ++k)
            acc.add(masses[k] *
                    std::exp(static_cast<long double>(lambda) * (law.values[k] - mean)));
          r.estimate = static_cast<double>(acc.value());
        } else {
          const long double w = static_cast<long double>(lambda) * (law.hi - law.lo);
          r.estimate = w == 0.0L
                           ? 1.0
                           : static_cast<double>((std::exp(static_cast<long double>(lambda) * (law.hi - mean)) -
                                                  std::exp(static_cast<long double>(lambda) * (law.lo - mean))) /
                                                 w);
        }
      } else {
        const auto est = mc_mean(spec.trials, mix_keys(spec.seed, y * 1000003 + li), 1, [&](CounterRng& rng) {
          double x;
          if (law.kind == BoundedLaw::Kind::uniform)
            x = law.lo + (law.hi - law.lo) * rng.uniform();
          else
            x = law.values[sample_index(law.probs, rng)];
          return std::exp(lambda * (x - mean));
        });
        r.estimate = est.mean;
        r.slack = 3.0 * est.stderr_;
        r.params += ";trials=" + std::to_string(spec.trials);
      }
      r.margin = r.bound - r.estimate;
      r.pass = decide(exact, r.estimate, r.bound, r.slack);
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

namespace {

void check_multinomial(const MultinomialSpec& spec) {
  if (spec.n == 0) throw Error(ErrorKind::parameter, "n must be >= 1");
  check_probs(spec.p, "multinomial masses");
  if (!(spec.delta > 0.0 && spec.delta < 1.0)) throw Error(ErrorKind::parameter, "delta must lie in (0, 1)");
}

// Probability (exact) or frequency (MC) of `fails(counts)` under Mult(n, p).
template <class Fails>
std::pair<double, bool> multinomial_event(const MultinomialSpec& spec, Fails&& fails) {
  const bool enumerable = compositions_count(spec.n, spec.p.size()) <= 2000000;
  const bool exact = spec.mode == Mode::exact || (spec.mode == Mode::automatic && enumerable);
  if (exact && !enumerable)
    throw Error(ErrorKind::invalid_input, "configuration too large for exact enumeration");
  if (exact) {
    ExactSum acc;
    const auto masses = exact_masses(spec.p);
    for_each_composition(spec.n, spec.p.size(), [&](const std::vector<std::size_t>& c) {
      if (fails(c)) acc.add(multinomial_pmf(c, masses));
    });
    return {static_cast<double>(acc.value()), true};
  }
  const auto f = mc_frequencies(spec.trials, spec.seed, spec.threads, 1,
                                [&](CounterRng& rng, std::vector<std::uint64_t>& hits) {
                                  std::vector<std::size_t> c(spec.p.size());
                                  sample_multinomial(spec.n, spec.p, rng, c);
                                  if (fails(c)) ++hits[0];
                                });
  return {f[0], false};
}

double sum_sq_of(const std::vector<std::size_t>& c, std::size_t n) {
  double s = 0.0;
  for (std::size_t k : c) {
    const double f = static_cast<double>(k) / static_cast<double>(n);
    s += f * f;
  }
  return s;
}

}  // namespace

CheckResult multinomial_square_check(const MultinomialSpec& spec) {
  check_multinomial(spec);
  double psq = 0.0;
  for (double p : spec.p) psq += p * p;
  const double K = static_cast<double>(spec.p.size());
  const double slack_term =
      2.0 * std::sqrt(2.0 / static_cast<double>(spec.n) * std::log(K / spec.delta));
  const auto [freq, exact] = multinomial_event(spec, [&](const std::vector<std::size_t>& c) {
    return psq > sum_sq_of(c, spec.n) + slack_term;
  });
  CheckResult r;
  r.check = "multinomial_square_sum";
  r.params = "n=" + std::to_string(spec.n) + ";p=" + vec(spec.p) + ";delta=" + num(spec.delta) +
             (exact ? "" : ";trials=" + std::to_string(spec.trials));
  r.estimate = freq;
  r.bound = spec.delta;
  r.exact = exact;
  r.slack = exact ? 0.0 : 3.0 * std::sqrt(spec.delta / static_cast<double>(spec.trials));
  r.margin = r.bound - r.estimate;
  r.pass = exact ? freq < spec.delta : freq < spec.delta + r.slack;
  return r;
}

CheckResult uhat_dominance_check(const MultinomialSpec& spec, double gamma) {
  check_multinomial(spec);
  if (!(gamma >= 1.0)) throw Error(ErrorKind::parameter, "gamma must be >= 1");
  double psq = 0.0;
  for (double p : spec.p) psq += p * p;
  const double n = static_cast<double>(spec.n);
  const double truth = gamma / (2.0 * n) + gamma * gamma / 2.0 * psq;
  const BoundParams params =
      BoundParams::from_gamma(spec.n, spec.p.size(), spec.delta, 0.0, gamma, 1.0);
  const auto [freq, exact] = multinomial_event(spec, [&](const std::vector<std::size_t>& c) {
    std::vector<std::uint64_t> counts(c.begin(), c.end());
    return truth > compute_uhat(CellCounts::from_counts(std::move(counts)), params);
  });
  CheckResult r;
  r.check = "uhat_dominance";
  r.params = "n=" + std::to_string(spec.n) + ";p=" + vec(spec.p) + ";delta=" + num(spec.delta) +
             ";gamma=" + num(gamma) + (exact ? "" : ";trials=" + std::to_string(spec.trials));
  r.estimate = freq;
  r.bound = spec.delta / 2.0;
  r.exact = exact;
  r.slack = exact ? 0.0 : 3.0 * std::sqrt(r.bound / static_cast<double>(spec.trials));
  r.margin = r.bound - r.estimate;
  r.pass = exact ? freq < r.bound : freq < r.bound + r.slack;
  return r;
}

// ---------------------------------------------------------------------------

double exp_mix_lambda_ceiling(double a, double b, double c, double nu) {
  if (c * nu >= 1.0 || a + b == 0.0) return kInf;
  return std::log(c) / ((1.0 - c * nu) * (a + b));
}

CheckResult exp_mix_check(const ExpMixSpec& spec) {
  if (!(spec.a >= 0.0 && spec.b >= 0.0)) throw Error(ErrorKind::parameter, "a, b must be >= 0");
  if (!(spec.c >= 1.0)) throw Error(ErrorKind::parameter, "c must be >= 1");
  if (!(spec.nu >= 0.0 && spec.nu <= 1.0)) throw Error(ErrorKind::parameter, "nu must lie in [0, 1]");
  const bool large = spec.c * spec.nu >= 1.0;
  const double ceiling = exp_mix_lambda_ceiling(spec.a, spec.b, spec.c, spec.nu);
  if (!(spec.lambda >= 0.0) || spec.lambda > ceiling)
    throw Error(ErrorKind::range,
                "lambda=" + num(spec.lambda) +
                    (large ? " must be >= 0 in the large-mean regime (c*nu >= 1)"
                           : " outside [0, " + num(ceiling) + "] of the small-mean regime (c*nu < 1)"));
  const DiscreteDist x = spec.x.values.empty() ? DiscreteDist::bernoulli(spec.nu) : spec.x;
  x.validate();
  if (x.mean() > spec.nu + 1e-15) throw Error(ErrorKind::invalid_input, "E X exceeds nu");

  CheckResult r;
  r.check = spec.a == 0.0 && spec.b == 1.0 ? "small_variable_mgf" : "exp_mix_mgf";
  r.params = "a=" + num(spec.a) + ";b=" + num(spec.b) + ";c=" + num(spec.c) + ";nu=" + num(spec.nu) +
             ";lambda=" + num(spec.lambda) + ";support=" + vec(x.values) + ";mass=" + vec(x.probs);
  r.bound = std::exp(spec.c * (spec.a + spec.b) * spec.nu * spec.lambda);
  r.exact = spec.mode != Mode::monte_carlo;
  auto f = [&](double v) { return spec.lambda * (spec.a * v * v + spec.b * v); };
  if (r.exact) {
    ExactSum acc;
    const auto masses = exact_masses(x.probs);
    for (std::size_t k = 0; k < x.values.size(); ++k)
      acc.add(masses[k] * std::exp(static_cast<long double>(f(x.values[k]))));
    r.estimate = static_cast<double>(acc.value());
  } else {
    const auto est = mc_mean(spec.trials, spec.seed, 1, [&](CounterRng& rng) {
      return std::exp(f(sample(x, rng)));
    });
    r.estimate = est.mean;
    r.slack = 3.0 * est.stderr_;
    r.params += ";trials=" + std::to_string(spec.trials);
  }
  r.margin = r.bound - r.estimate;
  r.pass = decide(r.exact, r.estimate, r.bound, r.slack);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void add(std::vector<CheckResult>& out, CheckResult r) { out.push_back(std::move(r)); }

void add_all(std::vector<CheckResult>& out, std::vector<CheckResult> rs) {
  for (auto& r : rs) out.push_back(std::move(r));
}

std::vector<double> scaled(const std::vector<double>& fracs, double top) {
  std::vector<double> v;
  for (double f : fracs) v.push_back(f * top);
  return v;
}

// Three-point law on {0, 1/2, 1} with mean m <= 1/2.
DiscreteDist three_point(double m) { return {{0.0, 0.5, 1.0}, {1.0 - 1.5 * m, m, 0.5 * m}}; }

void exact_suite(std::vector<CheckResult>& out, unsigned threads) {
  // Squared-sum MGF: binomial (i.i.d. Bernoulli) laws.
  for (std::size_t n : {1, 2, 3, 5, 8, 12, 16, 20})
    for (double nu : {0.05, 0.2, 0.5, 0.8, 1.0})
      for (double c : {1.0, 1.5, 3.0, 10.0}) {
        MgfCheckSpec s;
        s.n = n;
        s.nu = nu;
        s.c = c;
        s.mode = Mode::exact;
        s.threads = threads;
        const double n2 = static_cast<double>(n * n);
        if (c * nu >= 1.0) {
          for (double scale : {0.0, 0.1, 1.0, 5.0}) {
            s.lambda = scale / n2;
            add(out, mgf_square_check(s));
          }
        } else {
          for (bool ext : {false, true}) {
            s.extended_range = ext;
            const double top = mgf_lambda_ceiling(n, nu, c, ext);
            for (double f : {0.0, 0.5, 1.0}) {
              s.lambda = f * top;
              add(out, mgf_square_check(s));
            }
          }
        }
      }
  // Squared-sum MGF: heterogeneous bounded laws with means below nu.
  for (std::size_t n : {2, 4, 8})
    for (double nu : {0.1, 0.4})
      for (double c : {1.5, 4.0}) {
        MgfCheckSpec s;
        s.n = n;
        s.nu = nu;
        s.c = c;
        s.mode = Mode::exact;
        for (std::size_t i = 0; i < n; ++i) {
          const double m = nu * (0.5 + 0.5 * static_cast<double>(i) / static_cast<double>(n));
          s.variables.push_back(i % 2 == 0 ? three_point(m) : DiscreteDist::bernoulli(m));
        }
        s.extended_range = true;
        const double top = mgf_lambda_ceiling(n, nu, c, true);
        for (double f : {0.25, 1.0}) {
          s.lambda = std::isinf(top) ? f / static_cast<double>(n * n) : f * top;
          add(out, mgf_square_check(s));
        }
      }
  // Mixed exponent and single small variable.
  for (double a : {0.0, 1.0, 2.0})
    for (double b : {0.0, 1.0, 3.0})
      for (double c : {1.0, 1.5, 4.0})
        for (double nu : {0.1, 0.5, 0.9}) {
          ExpMixSpec s;
          s.a = a;
          s.b = b;
          s.c = c;
          s.nu = nu;
          s.mode = Mode::exact;
          const double top = exp_mix_lambda_ceiling(a, b, c, nu);
          for (const DiscreteDist& x :
               {DiscreteDist::bernoulli(nu), DiscreteDist::point(nu), three_point(std::min(nu, 0.5) / 2)}) {
            s.x = x;
            for (double f : {0.0, 0.5, 1.0}) {
              s.lambda = std::isinf(top) ? 4.0 * f : f * top;
              add(out, exp_mix_check(s));
            }
          }
        }
  // Conditional Hoeffding lemma.
  for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{-2.0, 3.0}}) {
    ConditionalSpec s;
    s.a = a;
    s.b = b;
    s.mode = Mode::exact;
    s.lambda_grid = {-4.0, -1.0, -0.1, 0.0, 0.1, 1.0, 4.0};
    BoundedLaw two{BoundedLaw::Kind::discrete, {a, b}, {0.5, 0.5}};
    BoundedLaw skew{BoundedLaw::Kind::discrete, {a, b}, {0.9, 0.1}};
    BoundedLaw three{BoundedLaw::Kind::discrete, {a, 0.5 * (a + b), b}, {0.2, 0.5, 0.3}};
    BoundedLaw point{BoundedLaw::Kind::discrete, {0.3 * a + 0.7 * b}, {1.0}};
    BoundedLaw uni{BoundedLaw::Kind::uniform, {}, {}, a, b};
    BoundedLaw inner{BoundedLaw::Kind::uniform, {}, {}, a + 0.25 * (b - a), a + 0.5 * (b - a)};
    s.x_given_y = {two, skew, three, point, uni, inner};
    add_all(out, hoeffding_lemma_conditional_check(s));
  }
  // Multinomial square-sum and the derived u_hat dominance.
  const std::vector<std::vector<double>> laws = {
      {1.0},
      {0.5, 0.5},
      {0.9, 0.1},
      {1.0 / 3, 1.0 / 3, 1.0 / 3},
      {0.7, 0.2, 0.1},
      {0.25, 0.25, 0.25, 0.25},
      {0.97, 0.01, 0.01, 0.01},
      {0.4, 0.3, 0.2, 0.1},
  };
  for (const auto& p : laws)
    for (std::size_t n : {1, 2, 4, 8, 12})
      for (double delta : {0.01, 0.1, 0.5}) {
        MultinomialSpec s;
        s.n = n;
        s.p = p;
        s.delta = delta;
        s.mode = Mode::exact;
        add(out, multinomial_square_check(s));
        for (double gamma : {1.0, 1.2}) add(out, uhat_dominance_check(s, gamma));
      }
  // Conditional tail bound, independent and multinomial counts.
  struct TailBase {
    std::vector<double> mu;
    std::size_t n;
    double gamma;
  };
  const std::vector<TailBase> bases = {
      {{0.2}, 1, 1.5},           {{0.2}, 5, 2.0},           {{0.5}, 10, 1.2},
      {{0.3, 0.6}, 5, 1.5},      {{0.1, 0.2}, 8, 3.0},      {{0.2, 0.3, 0.5}, 10, 2.0},
      {{0.5, 0.5}, 6, 2.0},      {{0.6, 0.8}, 5, 2.0},      {{0.25, 0.25, 0.5}, 4, 4.0},
      {{0.1, 0.1, 0.1}, 12, 1.1}};
  for (const TailBase& base : bases)
    for (CountModel cm : {CountModel::independent_binomial, CountModel::multinomial})
      for (TailRegime regime : {TailRegime::unified, TailRegime::small_gamma, TailRegime::large_gamma})
        for (bool degenerate : {false, true}) {
          TailCheckSpec s;
          s.m = base.mu.size();
          s.n = base.n;
          s.mu = base.mu;
          s.gamma = base.gamma;
          s.counts = cm;
          s.regime = regime;
          s.mode = Mode::exact;
          s.threads = threads;
          double mu_sum = 0.0;
          for (double v : s.mu) mu_sum += v;
          if (cm == CountModel::multinomial && mu_sum > 1.0 + 1e-12) continue;
          const double mu_min = *std::min_element(s.mu.begin(), s.mu.end());
          const bool large = s.gamma * mu_min >= 1.0;
          if ((regime == TailRegime::small_gamma && large) || (regime == TailRegime::large_gamma && !large))
            continue;
          if (degenerate) s.latent = LatentModel::degenerate(s.m);
          const double tmax = tail_t_max(s);
          const double u = tail_u(s.mu, s.n, s.gamma);
          s.t_grid = std::isinf(tmax) ? scaled({0.0, 0.25, 0.5, 1.0, 2.0}, std::sqrt(u))
                                      : scaled({0.0, 0.25, 0.5, 0.75, 1.0}, tmax);
          const auto res = hoeffding_conditional_check(s);
          add_all(out, tail_rows(s, res));
        }
}

void mc_suite(std::vector<CheckResult>& out, std::size_t trials, std::uint64_t seed, unsigned threads) {
  std::uint64_t tag = 0;
  auto next_seed = [&] { return derive_seed(seed, ++tag); };

  // Conditional tail bound: (m, n, mu, gamma, t) grid.
  struct TailBase {
    std::vector<double> mu;
    std::size_t n;
    double gamma;
    CountModel counts;
  };
  const std::vector<TailBase> bases = {
      {{0.2, 0.3, 0.5}, 10, 2.0, CountModel::independent_binomial},
      {{0.1}, 20, 1.5, CountModel::independent_binomial},
      {{0.05, 0.1}, 30, 1.3, CountModel::independent_binomial},
      {{0.1, 0.1, 0.1, 0.1}, 25, 1.2, CountModel::independent_binomial},
      {{0.3, 0.3}, 40, 1.1, CountModel::independent_binomial},
      {{0.5, 0.7}, 20, 2.5, CountModel::independent_binomial},
      {{0.02, 0.05, 0.1}, 50, 1.5, CountModel::independent_binomial},
      {{0.25, 0.25, 0.25, 0.25}, 16, 1.05, CountModel::independent_binomial},
      {{0.4}, 60, 1.02, CountModel::independent_binomial},
      {{0.2, 0.3, 0.5}, 10, 2.0, CountModel::multinomial},
      {{0.1, 0.2, 0.3, 0.4}, 25, 1.2, CountModel::multinomial},
      {{0.05, 0.05}, 40, 1.5, CountModel::multinomial},
      {{0.5, 0.5}, 30, 1.1, CountModel::multinomial},
      {{0.3, 0.3, 0.3}, 20, 4.0, CountModel::multinomial},
  };
  for (const TailBase& base : bases)
    for (bool degenerate : {false, true}) {
      if (degenerate && base.counts == CountModel::multinomial) continue;
      TailCheckSpec s;
      s.m = base.mu.size();
      s.n = base.n;
      s.mu = base.mu;
      s.gamma = base.gamma;
      s.counts = base.counts;
      s.trials = trials;
      s.seed = next_seed();
      s.mode = Mode::monte_carlo;
      s.threads = threads;
      if (degenerate) s.latent = LatentModel::degenerate(s.m);
      const double tmax = tail_t_max(s);
      const double u = tail_u(s.mu, s.n, s.gamma);
      s.t_grid = std::isinf(tmax) ? scaled({0.0, 0.25, 0.5, 1.0}, std::sqrt(u))
                                  : scaled({0.0, 1.0 / 3, 2.0 / 3, 1.0}, tmax);
      add_all(out, tail_rows(s, hoeffding_conditional_check(s)));
    }

  // Squared-sum MGF beyond enumeration size.
  for (std::size_t n : {30, 60, 120})
    for (auto [nu, c] : {std::pair{0.05, 2.0}, std::pair{0.3, 1.5}, std::pair{0.5, 2.0}}) {
      MgfCheckSpec s;
      s.n = n;
      s.nu = nu;
      s.c = c;
      s.trials = trials;
      s.seed = next_seed();
      s.mode = Mode::monte_carlo;
      s.threads = threads;
      const double top = mgf_lambda_ceiling(n, nu, c, false);
      s.lambda = std::isinf(top) ? 0.5 / static_cast<double>(n * n) : top;
      add(out, mgf_square_check(s));
    }
  // Mixed exponent.
  for (auto [a, b, c, nu] : {std::tuple{1.0, 2.0, 1.5, 0.2}, std::tuple{0.0, 1.0, 2.0, 0.6},
                             std::tuple{2.0, 0.5, 3.0, 0.1}}) {
    ExpMixSpec s;
    s.a = a;
    s.b = b;
    s.c = c;
    s.nu = nu;
    s.trials = trials;
    s.seed = next_seed();
    s.mode = Mode::monte_carlo;
    const double top = exp_mix_lambda_ceiling(a, b, c, nu);
    s.lambda = std::isinf(top) ? 2.0 : top;
    add(out, exp_mix_check(s));
  }
  // Conditional Hoeffding lemma.
  {
    ConditionalSpec s;
    s.a = 0.0;
    s.b = 1.0;
    s.trials = trials;
    s.seed = next_seed();
    s.mode = Mode::monte_carlo;
    s.lambda_grid = {-2.0, 0.5, 1.0, 3.0};
    s.x_given_y = {BoundedLaw{BoundedLaw::Kind::discrete, {0.0, 1.0}, {0.5, 0.5}},
                   BoundedLaw{BoundedLaw::Kind::uniform, {}, {}, 0.0, 1.0}};
    add_all(out, hoeffding_lemma_conditional_check(s));
  }
  // Multinomial square-sum and u_hat dominance at sizes beyond enumeration.
  const std::vector<std::pair<std::size_t, std::vector<double>>> laws = {
      {100, std::vector<double>(10, 0.1)},
      {50, {0.99, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001}},
      {200, {0.5, 0.3, 0.1, 0.05, 0.05}},
  };
  for (const auto& [n, p] : laws) {
    MultinomialSpec s;
    s.n = n;
    s.p = p;
    s.delta = 0.05;
    s.trials = trials;
    s.seed = next_seed();
    s.mode = Mode::monte_carlo;
    s.threads = threads;
    add(out, multinomial_square_check(s));
    add(out, uhat_dominance_check(s, 1.1));
  }
}

}  // namespace

std::vector<CheckResult> run_suite(const SuiteOptions& options) {
  std::vector<CheckResult> out;
  if (options.suite != Suite::monte_carlo) exact_suite(out, options.threads);
  if (options.suite != Suite::exact) mc_suite(out, options.trials, options.seed, options.threads);
  return out;
}

}  // namespace gencert::conclab
