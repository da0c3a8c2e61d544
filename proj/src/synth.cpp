#include "gencert/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "gencert/error.hpp"
#include "gencert/parallel.hpp"
#include "gencert/partition.hpp"
#include "gencert/rng.hpp"

namespace gencert::synth {
namespace {

double draw_coordinate(const Component& c, std::size_t j, CounterRng& rng) {
  if (c.kind == Component::Kind::gaussian) return c.a[j] + c.b[j] * rng.normal();
  return c.a[j] + (c.b[j] - c.a[j]) * rng.uniform();
}

// Pr(x_0 <= x) under one class.
double component_cdf(const Component& c, double x) {
  if (c.kind == Component::Kind::gaussian) return normal_cdf((x - c.a[0]) / c.b[0]);
  if (x <= c.a[0]) return 0.0;
  if (x >= c.b[0]) return 1.0;
  return (x - c.a[0]) / (c.b[0] - c.a[0]);
}

// Pr(w . x + bias > 0) under one class; nullopt when no closed form applies.
std::optional<double> positive_rate(const Component& c, const Classifier& h, std::size_t dim) {
  if (c.kind == Component::Kind::gaussian) {
    double m = h.bias, v = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      m += h.w[j] * c.a[j];
      v += h.w[j] * h.w[j] * c.b[j] * c.b[j];
    }
    if (v == 0.0) return m > 0.0 ? 1.0 : 0.0;
    return normal_cdf(m / std::sqrt(v));
  }
  if (dim == 1) {
    const double w = h.w[0];
    if (w == 0.0) return h.bias > 0.0 ? 1.0 : 0.0;
    const double t = -h.bias / w;  // boundary
    const double below = component_cdf(c, t);
    return w > 0.0 ? 1.0 - below : below;
  }
  return std::nullopt;
}

std::optional<double> analytic_error(const MixtureSpec& spec, const Classifier& h) {
  const auto p0 = positive_rate(spec.classes[0], h, spec.dim);
  const auto p1 = positive_rate(spec.classes[1], h, spec.dim);
  if (!p0 || !p1) return std::nullopt;
  return (1.0 - spec.prior1) * *p0 + spec.prior1 * (1.0 - *p1);
}

// Threshold on x_0 with the fewest training errors, predicting 1 above it.
Classifier fit_threshold(const FeatureTable& f, const std::vector<int>& labels) {
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return f.row(a)[0] < f.row(b)[0]; });
  long errors = 0;
  for (int y : labels) errors += y == 0 ? 1 : 0;  // threshold below every point
  long best = errors;
  double best_t = f.size() ? f.row(order.front())[0] - 1.0 : 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    errors += labels[order[k]] == 0 ? -1 : 1;
    const bool gap = k + 1 == order.size() || f.row(order[k + 1])[0] > f.row(order[k])[0];
    if (gap && errors < best) {
      best = errors;
      best_t = k + 1 == order.size() ? f.row(order[k])[0]
                                     : 0.5 * (f.row(order[k])[0] + f.row(order[k + 1])[0]);
    }
  }
  return Classifier::threshold(best_t, f.dim);
}

// Masses of k-means cells in 1-D: Voronoi intervals between sorted centroids.
std::vector<double> voronoi_masses(const MixtureSpec& spec, const Centroids& c) {
  const std::size_t K = c.K();
  std::vector<std::size_t> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return c.row(a)[0] < c.row(b)[0]; });
  std::vector<double> masses(K, 0.0);
  double lo_cdf = 0.0;
  std::size_t j = 0;
  while (j < K) {
    // Coincident centroids: the lowest index wins every tie.
    std::size_t k = j, owner = order[j];
    while (k + 1 < K && c.row(order[k + 1])[0] == c.row(order[j])[0]) owner = std::min(owner, order[++k]);
    const double hi_cdf =
        k + 1 == K ? 1.0 : marginal_cdf(spec, 0.5 * (c.row(order[k])[0] + c.row(order[k + 1])[0]));
    masses[owner] = hi_cdf - lo_cdf;
    lo_cdf = hi_cdf;
    j = k + 1;
  }
  return masses;
}

double parse_double(const std::string& v, std::size_t line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw Error(ErrorKind::parse, "not a number: '" + v + "'", line);
  return out;
}

std::vector<double> parse_list(const std::string& v, std::size_t line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, line));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Classifier Classifier::threshold(double t, std::size_t dim) {
  Classifier h;
  h.w.assign(dim, 0.0);
  h.w.at(0) = 1.0;
  h.bias = -t;
  return h;
}

int Classifier::predict(std::span<const double> x) const {
  double s = bias;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
  return s > 0.0 ? 1 : 0;
}

MixtureSpec MixtureSpec::gaussian_1d(double separation) {
  MixtureSpec s;
  s.dim = 1;
  s.prior1 = 0.5;
  s.classes[0] = {Component::Kind::gaussian, {-separation}, {1.0}};
  s.classes[1] = {Component::Kind::gaussian, {separation}, {1.0}};
  s.classifier = Classifier::threshold(0.0);
  return s;
}

void MixtureSpec::validate() const {
  if (dim == 0) throw Error(ErrorKind::invalid_input, "mixture dimension must be >= 1");
  if (!(prior1 >= 0.0 && prior1 <= 1.0)) throw Error(ErrorKind::invalid_input, "prior outside [0, 1]");
  for (const Component& c : classes) {
    if (c.a.size() != dim || c.b.size() != dim)
      throw Error(ErrorKind::invalid_input, "component parameters must have one entry per dimension");
    for (std::size_t j = 0; j < dim; ++j) {
      if (!std::isfinite(c.a[j]) || !std::isfinite(c.b[j]))
        throw Error(ErrorKind::invalid_input, "component parameters must be finite");
      if (c.kind == Component::Kind::gaussian && !(c.b[j] > 0.0))
        throw Error(ErrorKind::invalid_input, "standard deviations must be positive");
      if (c.kind == Component::Kind::uniform && !(c.b[j] > c.a[j]))
        throw Error(ErrorKind::invalid_input, "uniform ranges must have positive width");
    }
  }
  if (classifier.w.size() != dim) throw Error(ErrorKind::invalid_input, "classifier dimension mismatch");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

TrueError true_error_mc(const MixtureSpec& spec, std::size_t samples, std::uint64_t seed) {
  spec.validate();
  if (samples < 2) throw Error(ErrorKind::parameter, "need at least 2 samples");
  std::vector<double> x(spec.dim);
  std::uint64_t wrong = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    CounterRng rng(seed, i);
    const int y = rng.bernoulli(spec.prior1) ? 1 : 0;
    for (std::size_t j = 0; j < spec.dim; ++j) x[j] = draw_coordinate(spec.classes[y], j, rng);
    wrong += spec.classifier.predict(x) != y ? 1 : 0;
  }
  TrueError e;
  e.value = static_cast<double>(wrong) / static_cast<double>(samples);
  e.stderr_ = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(samples));
  return e;
}

TrueError true_error(const MixtureSpec& spec, std::size_t mc_samples, std::uint64_t seed) {
  spec.validate();
  if (const auto v = analytic_error(spec, spec.classifier)) return {*v, 0.0, true};
  return true_error_mc(spec, mc_samples, seed);
}

Sample draw(const MixtureSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  Sample s;
  s.features.dim = spec.dim;
  s.features.ids.reserve(n);
  s.features.values.resize(n * spec.dim);
  s.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i);
    const int y = rng.bernoulli(spec.prior1) ? 1 : 0;
    s.labels[i] = y;
    auto row = s.features.row(i);
    for (std::size_t j = 0; j < spec.dim; ++j) row[j] = draw_coordinate(spec.classes[y], j, rng);
    s.features.ids.push_back("s" + std::to_string(i));
  }
  return s;
}

std::vector<double> zero_one_losses(const Classifier& h, const FeatureTable& features,
                                    const std::vector<int>& labels) {
  if (labels.size() != features.size()) throw Error(ErrorKind::invalid_input, "one label per row required");
  if (h.w.size() != features.dim) throw Error(ErrorKind::dimension, "classifier dimension mismatch");
  std::vector<double> losses(features.size());
  for (std::size_t i = 0; i < features.size(); ++i)
    losses[i] = h.predict(features.row(i)) != labels[i] ? 1.0 : 0.0;
  return losses;
}

double marginal_cdf(const MixtureSpec& spec, double x) {
  return (1.0 - spec.prior1) * component_cdf(spec.classes[0], x) +
         spec.prior1 * component_cdf(spec.classes[1], x);
}

double marginal_quantile(const MixtureSpec& spec, double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::parameter, "quantile level must lie in (0, 1)");
  double lo = -1.0, hi = 1.0;
  while (marginal_cdf(spec, lo) > q) lo *= 2.0;
  while (marginal_cdf(spec, hi) < q) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (marginal_cdf(spec, mid) < q ? lo : hi) = mid;
  }
  return hi;
}

std::vector<double> quantile_edges(const MixtureSpec& spec, std::size_t K) {
  if (K == 0) throw Error(ErrorKind::parameter, "K must be >= 1");
  std::vector<double> edges;
  for (std::size_t i = 1; i < K; ++i)
    edges.push_back(marginal_quantile(spec, static_cast<double>(i) / static_cast<double>(K)));
  return edges;
}

std::vector<double> interval_masses(const MixtureSpec& spec, const std::vector<double>& edges) {
  std::vector<double> p;
  double prev = 0.0;
  for (double e : edges) {
    const double c = marginal_cdf(spec, e);
    p.push_back(c - prev);
    prev = c;
  }
  p.push_back(1.0 - prev);
  return p;
}

CoverageResult coverage_run(const MixtureSpec& spec, const CoverageOptions& o) {
  spec.validate();
  if (o.trials == 0 || o.n == 0) throw Error(ErrorKind::parameter, "trials and n must be >= 1");
  if (o.K == 0 || o.K > o.n) throw Error(ErrorKind::parameter, "K must lie in [1, n]");
  if (o.trained_threshold && spec.dim != 1)
    throw Error(ErrorKind::invalid_input, "trained thresholds need a 1-D mixture");
  const bool known_mass = o.known_mass_variant && spec.dim == 1;
  const BoundParams params = BoundParams::from_eps_gamma(o.n, o.K, o.delta, o.alpha, o.eps_gamma, 1.0);
  check_alpha_admissible(params);

  CoverageResult res;
  res.truth = true_error(spec, 1000000, derive_seed(o.seed, 0x7472757468));
  res.guarantee = 1.0 - o.eps_gamma - o.delta;
  res.gamma = params.gamma;
  res.known_mass_delta1 = o.eps_gamma;
  res.known_mass_delta2 = o.delta / 2.0;
  res.trials.resize(o.trials);

  std::vector<double> fixed_edges;
  if (o.partition == PartitionKind::quantile) {
    if (spec.dim != 1) throw Error(ErrorKind::invalid_input, "quantile partitions need a 1-D mixture");
    fixed_edges = quantile_edges(spec, o.K);
  }

  parallel_for(o.trials, o.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const std::uint64_t trial_seed = derive_seed(o.seed, t);
      const Sample s = draw(spec, o.n, trial_seed);
      Classifier h = spec.classifier;
      double truth = res.truth.value;
      if (o.trained_threshold) {
        h = fit_threshold(s.features, s.labels);
        truth = *analytic_error(spec, h);
      }
      const std::vector<double> losses = zero_one_losses(h, s.features, s.labels);

      std::vector<std::uint32_t> cells;
      std::vector<double> masses;
      if (o.partition == PartitionKind::quantile) {
        std::vector<double> xs(s.features.values.begin(), s.features.values.end());
        cells = interval_cells(xs, fixed_edges);
        if (known_mass) masses = interval_masses(spec, fixed_edges);
      } else {
        const Centroids c = fit(s.features, o.K, derive_seed(trial_seed, 0x6b6d), o.max_iters, 1);
        cells = nearest_cells(s.features, c, 1);
        if (known_mass) masses = voronoi_masses(spec, c);
      }
      const CellCounts counts = CellCounts::from_cells(cells, o.K);
      const BoundReport rep = certify(losses, counts, params);

      TrialRecord& r = res.trials[t];
      r.train_loss = rep.train_loss;
      r.sum_sq = rep.terms.sum_sq;
      r.truth = truth;
      r.bound = rep.bound;
      r.covered = rep.bound >= truth;
      if (known_mass) {
        GeneralParams gp;
        gp.p = masses;
        gp.delta1 = res.known_mass_delta1;
        gp.delta2 = res.known_mass_delta2;
        const BoundReport g = certify_general(losses, counts, gp, params);
        r.bound_general = g.bound;
        r.covered_general = g.bound >= truth;
      }
    }
  });

  const double T = static_cast<double>(o.trials);
  CoverageSummary est, known;
  for (const TrialRecord& r : res.trials) {
    est.coverage_fraction += r.covered ? 1.0 : 0.0;
    est.mean_bound += r.bound;
    est.mean_gap += r.bound - r.truth;
    res.mean_sum_sq += r.sum_sq;
    if (known_mass) {
      known.coverage_fraction += *r.covered_general ? 1.0 : 0.0;
      known.mean_bound += *r.bound_general;
      known.mean_gap += *r.bound_general - r.truth;
    }
  }
  for (CoverageSummary* c : {&est, &known}) {
    c->coverage_fraction /= T;
    c->mean_bound /= T;
    c->mean_gap /= T;
  }
  res.mean_sum_sq /= T;
  res.estimated_mass = est;
  if (known_mass) res.known_mass = known;
  return res;
}

Experiment parse_experiment(const std::string& text) {
  Experiment ex;
  ex.spec = MixtureSpec::gaussian_1d();
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::parse, "expected key=value", line);
    const std::string key = trim(s.substr(0, eq));
    if (kv.count(key)) throw Error(ErrorKind::parse, "duplicate key '" + key + "'", line);
    kv[key] = {trim(s.substr(eq + 1)), line};
  }

  auto& spec = ex.spec;
  auto& o = ex.options;
  auto take = [&](const std::string& key, const std::function<void(const std::string&, std::size_t)>& f) {
    const auto it = kv.find(key);
    if (it == kv.end()) return;
    f(it->second.first, it->second.second);
    kv.erase(it);
  };
  auto count = [](const std::string& v, std::size_t l) {
    const double d = parse_double(v, l);
    if (!(d >= 0.0) || d != std::floor(d)) throw Error(ErrorKind::parse, "expected a non-negative integer", l);
    return static_cast<std::size_t>(d);
  };
  auto flag = [](const std::string& v, std::size_t l) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw Error(ErrorKind::parse, "expected true or false", l);
  };

  take("dim", [&](const std::string& v, std::size_t l) { spec.dim = count(v, l); });
  take("prior1", [&](const std::string& v, std::size_t l) { spec.prior1 = parse_double(v, l); });
  for (int c = 0; c < 2; ++c) {
    const std::string p = "class" + std::to_string(c) + ".";
    auto& comp = spec.classes[c];
    take(p + "kind", [&](const std::string& v, std::size_t l) {
      if (v == "gaussian")
        comp.kind = Component::Kind::gaussian;
      else if (v == "uniform")
        comp.kind = Component::Kind::uniform;
      else
        throw Error(ErrorKind::parse, "unknown component kind '" + v + "'", l);
    });
    for (const char* k : {"mean", "lo"})
      take(p + k, [&](const std::string& v, std::size_t l) { comp.a = parse_list(v, l); });
    for (const char* k : {"sd", "hi"})
      take(p + k, [&](const std::string& v, std::size_t l) { comp.b = parse_list(v, l); });
  }
  spec.classifier = Classifier::threshold(0.0, std::max<std::size_t>(spec.dim, 1));
  take("threshold", [&](const std::string& v, std::size_t l) {
    spec.classifier = Classifier::threshold(parse_double(v, l), spec.dim);
  });
  take("classifier.w", [&](const std::string& v, std::size_t l) { spec.classifier.w = parse_list(v, l); });
  take("classifier.bias", [&](const std::string& v, std::size_t l) { spec.classifier.bias = parse_double(v, l); });
  take("n", [&](const std::string& v, std::size_t l) { o.n = count(v, l); });
  take("trials", [&](const std::string& v, std::size_t l) { o.trials = count(v, l); });
  take("K", [&](const std::string& v, std::size_t l) { o.K = count(v, l); });
  take("delta", [&](const std::string& v, std::size_t l) { o.delta = parse_double(v, l); });
  take("eps_gamma", [&](const std::string& v, std::size_t l) { o.eps_gamma = parse_double(v, l); });
  take("alpha", [&](const std::string& v, std::size_t l) { o.alpha = parse_double(v, l); });
  take("seed", [&](const std::string& v, std::size_t l) { o.seed = count(v, l); });
  take("max_iters", [&](const std::string& v, std::size_t l) { o.max_iters = count(v, l); });
  take("partition", [&](const std::string& v, std::size_t l) {
    if (v == "kmeans")
      o.partition = PartitionKind::kmeans;
    else if (v == "quantile")
      o.partition = PartitionKind::quantile;
    else
      throw Error(ErrorKind::parse, "unknown partition '" + v + "'", l);
  });
  take("known_mass", [&](const std::string& v, std::size_t l) { o.known_mass_variant = flag(v, l); });
  take("trained_threshold", [&](const std::string& v, std::size_t l) { o.trained_threshold = flag(v, l); });
  if (!kv.empty()) {
    const auto& [key, val] = *kv.begin();
    throw Error(ErrorKind::parse, "unknown key '" + key + "'", val.second);
  }
  spec.validate();
  return ex;
}

}  // namespace gencert::synth
