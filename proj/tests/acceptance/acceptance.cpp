// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "gencert/augment.hpp"
#include "gencert/bound_core.hpp"
#include "gencert/conclab.hpp"
#include "gencert/io.hpp"
#include "gencert/optimize.hpp"
#include "gencert/partition.hpp"
#include "gencert/rng.hpp"
#include "gencert/synth.hpp"
#include "oracle/closed_form.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace gencert;

constexpr double kClosedFormRelTol = 1e-12;
constexpr double kImageNetAbsTol = 1e-6;
constexpr double kImageNetUncOracle = 0.25502953992144586;
constexpr double kBaselineUnc = 0.36679;        // 57.924% - 21.245%
constexpr double kBaselineSpread = 0.04328;
constexpr std::uint64_t kImageNetN = 1281167;
constexpr std::size_t kMcTrials = 100000;
constexpr std::size_t kMcMinTuples = 50;
constexpr double kCoverageLevel = 0.95;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %d %s: %s (%.2f s) %s\n", id, name, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double log_uniform(CounterRng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

// ---------------------------------------------------------------------------

Outcome closed_form_fidelity() {
  CounterRng rng(20240601, 1);
  std::size_t certify_tuples = 0, general_tuples = 0;
  double worst[5] = {0, 0, 0, 0, 0};  // u_hat, g, alpha_max, certify, certify_general
  while (certify_tuples < 1000 || general_tuples < 1000) {
    const std::size_t K = static_cast<std::size_t>(log_uniform(rng, 1, 2000));
    const std::uint64_t n = static_cast<std::uint64_t>(log_uniform(rng, 1, 20000));
    const bool skewed = rng.bernoulli(0.5);
    std::vector<std::uint64_t> counts(K, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      const double u = rng.uniform();
      ++counts[std::min<std::size_t>(K - 1, static_cast<std::size_t>(K * (skewed ? u * u : u)))];
    }
    const double C = 0.5 + 4.5 * rng.uniform();
    std::vector<double> losses(n);
    for (auto& l : losses) l = C * rng.uniform();
    const double delta = 1e-4 + 0.8 * rng.uniform();
    const auto cc = CellCounts::from_counts(counts);

    if (certify_tuples < 1000) {
      BoundParams p;
      if (rng.bernoulli(0.5)) {
        const double gamma = 1.0 + 0.5 * rng.uniform();
        p = BoundParams::from_gamma(n, K, delta, rng.uniform() * alpha_max(n, K, gamma), gamma, C);
      } else {
        const double eps = log_uniform(rng, 1e-3, 0.5);
        double alpha = log_uniform(rng, 0.05, 200);
        p = BoundParams::from_eps_gamma(n, K, delta, alpha, eps, C);
        for (int tries = 0; tries < 40 && alpha > alpha_max(n, K, p.gamma); ++tries) {
          alpha *= 0.7;
          p = BoundParams::from_eps_gamma(n, K, delta, alpha, eps, C);
        }
        if (alpha > alpha_max(n, K, p.gamma)) continue;
      }
      const auto r = certify(losses, cc, p);
      const oracle::Real g = p.gamma;
      worst[0] = std::max(worst[0], oracle::rel_err(compute_uhat(cc, p), oracle::uhat(counts, delta, g)));
      worst[1] = std::max(worst[1], oracle::rel_err(r.terms.g_val, oracle::g(cc.t_size(), K, n, delta / 2, C)));
      worst[2] = std::max(worst[2], oracle::rel_err(alpha_max(n, K, p.gamma), oracle::alpha_max(n, K, g)));
      worst[3] = std::max(worst[3], oracle::rel_err(r.bound, oracle::bound(losses, counts, delta, p.alpha, g, C)));
      ++certify_tuples;
    }

    if (general_tuples < 1000) {
      const double gamma = 1.0 + log_uniform(rng, 1e-3, 1.0);
      std::vector<double> p(K);
      double s = 0;
      for (auto& x : p) s += (x = 0.05 + rng.uniform());
      for (auto& x : p) x /= s;
      const double delta2 = 1e-4 + 0.5 * rng.uniform();
      const double floor = general_delta1_floor(general_u(p, n, gamma), n, gamma);
      if (floor >= 1.0 - delta2) continue;
      const double delta1 = floor + (1.0 - delta2 - floor) * rng.uniform();
      const auto r = certify_general(losses, cc, GeneralParams{p, delta1, delta2},
                                     BoundParams::from_gamma(n, K, 0.5, 0, gamma, C));
      worst[4] = std::max(worst[4], oracle::rel_err(r.bound, oracle::known_mass_bound(losses, counts, p, delta1,
                                                                                       delta2, gamma, C)));
      ++general_tuples;
    }
  }
  const double w = *std::max_element(worst, worst + 5);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "tuples=%zu/%zu max_rel_err u_hat=%.2e g=%.2e alpha_max=%.2e certify=%.2e known_mass=%.2e tol=%.0e",
                certify_tuples, general_tuples, worst[0], worst[1], worst[2], worst[3], worst[4], kClosedFormRelTol);
  return {w <= kClosedFormRelTol, buf};
}

Outcome imagenet_arithmetic() {
  std::vector<std::uint64_t> counts(200, kImageNetN / 200);
  for (std::size_t i = 0; i < kImageNetN % 200; ++i) ++counts[i];
  const auto cc = CellCounts::from_counts(counts);
  const auto p = BoundParams::from_eps_gamma(kImageNetN, 200, 0.01, 100, 0.04, 1.0);
  const std::vector<double> zeros(kImageNetN, 0.0);
  const auto r = certify(zeros, cc, p);
  const double ceiling = kBaselineUnc - kBaselineSpread;
  const bool close = std::abs(r.terms.unc - kImageNetUncOracle) <= kImageNetAbsTol;
  const bool below = r.terms.unc < ceiling;
  char buf[256];
  std::snprintf(buf, sizeof buf, "unc=%.17g oracle=%.17g |diff|=%.1e ceiling=%.5f confidence=%.6f", r.terms.unc,
                kImageNetUncOracle, std::abs(r.terms.unc - kImageNetUncOracle), ceiling, r.confidence);
  return {close && below, buf};
}

Outcome suite_outcome(const std::vector<conclab::CheckResult>& rows, bool want_exact, std::size_t* tail_tuples) {
  std::size_t failed = 0, wrong_mode = 0;
  std::set<std::string> tuples;
  std::string first;
  for (const auto& r : rows) {
    if (r.exact != want_exact) ++wrong_mode;
    if (!r.pass) {
      if (failed++ == 0) first = r.check + " " + r.params;
    }
    if (r.check.rfind("conditional_tail", 0) == 0) {
      const auto at = r.params.find(";m=");
      const auto end = r.params.find(";u=");
      tuples.insert(r.params.substr(at, end - at));
    }
  }
  if (tail_tuples) *tail_tuples = tuples.size();
  char buf[512];
  std::snprintf(buf, sizeof buf, "checks=%zu failed=%zu tail_tuples=%zu%s%s", rows.size(), failed, tuples.size(),
                failed ? " first_failure=" : "", first.c_str());
  return {failed == 0 && wrong_mode == 0 && !rows.empty(), buf};
}

Outcome exact_suite() {
  conclab::SuiteOptions o;
  o.suite = conclab::Suite::exact;
  return suite_outcome(conclab::run_suite(o), true, nullptr);
}

Outcome mc_suite() {
  conclab::SuiteOptions o;
  o.suite = conclab::Suite::monte_carlo;
  o.trials = kMcTrials;
  o.seed = 7;
  std::size_t tuples = 0;
  Outcome out = suite_outcome(conclab::run_suite(o), false, &tuples);
  out.pass = out.pass && tuples >= kMcMinTuples;
  out.detail += " trials=" + std::to_string(kMcTrials);
  return out;
}

Outcome coverage() {
  synth::CoverageOptions o;
  o.n = 2000;
  o.K = 20;
  o.delta = 0.01;
  o.eps_gamma = 0.04;
  o.alpha = 30;
  o.trials = 200;
  o.seed = 2024;
  const auto r = synth::coverage_run(synth::MixtureSpec::gaussian_1d(), o);
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "truth=%.7f coverage=%.3f guarantee=%.2f mean_bound=%.4f mean_gap=%.4f alpha=30 "
                "known_mass_coverage=%.3f",
                r.truth.value, r.estimated_mass.coverage_fraction, r.guarantee, r.estimated_mass.mean_bound,
                r.estimated_mass.mean_gap, r.known_mass ? r.known_mass->coverage_fraction : -1.0);
  return {r.estimated_mass.coverage_fraction >= kCoverageLevel && std::abs(r.truth.value - 0.1586553) < 1e-7, buf};
}

Outcome parameter_dynamics() {
  const auto data = fixtures::make_dataset(10000, 42);
  const auto ks = default_k_grid();
  std::vector<double> mean_sum_sq(ks.size(), 0.0);
  std::vector<CellCounts> seed0(ks.size());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const Centroids c = fit(data.features, ks[i], partition_seed(seed, ks[i]), kDefaultMaxIters);
      const auto cc = CellCounts::from_cells(nearest_cells(data.features, c), ks[i]);
      mean_sum_sq[i] += compute_sum_sq(cc) / 5.0;
      if (seed == 0) seed0[i] = cc;
    }
  }
  bool sum_sq_ok = true;
  std::string trace;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i > 0 && mean_sum_sq[i] > mean_sum_sq[i - 1]) sum_sq_ok = false;
    trace += (i ? "," : "") + fmt("%.3e", mean_sum_sq[i]);
  }
  // Unc as a function of alpha, admissible or not, for every partition.
  bool unc_ok = true;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double prev = INFINITY;
    for (int a = 10; a <= 100; a += 10) {
      const auto t = compute_terms(seed0[i], BoundParams::from_eps_gamma(10000, ks[i], 0.01, a, 0.04, 1.0));
      if (!(t.unc < prev)) unc_ok = false;
      prev = t.unc;
    }
  }
  return {sum_sq_ok && unc_ok, "mean_sum_sq[K=100..10000]=" + trace + (unc_ok ? " unc_strictly_decreasing" : " unc_not_monotone")};
}

Outcome augment_reduction() {
  std::string detail;
  bool ok = true;
  // Identity transform, per-cell-constant losses.
  CounterRng rng(77, 7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t K = 1 + rng.below(30);
    const std::uint64_t n = 50 + rng.below(3000);
    std::vector<double> level(K);
    for (auto& v : level) v = rng.uniform();
    std::vector<std::uint32_t> cells(n);
    std::vector<double> losses(n);
    for (std::size_t i = 0; i < n; ++i) {
      cells[i] = static_cast<std::uint32_t>(rng.below(K));
      losses[i] = level[cells[i]];
    }
    const auto cc = CellCounts::from_cells(cells, K);
    const auto p = BoundParams::from_gamma(n, K, 0.01, 0.9 * alpha_max(n, K, 1.05), 1.05, 1.0);
    if (certify_aug(losses, cells, losses, cells, cc, p).bound != certify(losses, cc, p).bound) ok = false;
  }
  detail += ok ? "reduction=bit-exact(50)" : "reduction=MISMATCH";
  const auto params = BoundParams::from_gamma(3, 2, 0.1, 0.5, 1.01, 1.0);
  {
    // S {0,1 | 1}, S_hat {1,1 | 0}: eps = (0.5, 1), proportions match.
    const std::vector<double> lo{0, 1, 1}, la{1, 1, 0};
    const std::vector<std::uint32_t> co{0, 0, 1}, ca{0, 0, 1};
    const auto st = pair_stats(lo, co, la, ca, 2);
    const auto r = certify_aug(lo, co, la, ca, CellCounts::from_cells(co, 2), params);
    const bool f = st.cells[0].eps_bar == 0.5 && st.cells[1].eps_bar == 1.0 && !r.corrected &&
                   std::abs(*r.main_part - 4.0 / 3.0) <= 1e-15;
    ok = ok && f;
    detail += f ? " fixture_a=ok" : " fixture_a=MISMATCH";
  }
  {
    // S {0,1 | 1}, S_hat {1 | 0,0}: eps = (0.5, 1), correction -1/6.
    const std::vector<double> lo{0, 1, 1}, la{1, 0, 0};
    const std::vector<std::uint32_t> co{0, 0, 1}, ca{0, 1, 1};
    const auto st = pair_stats(lo, co, la, ca, 2);
    const auto r = certify_aug(lo, co, la, ca, CellCounts::from_cells(co, 2), params);
    const bool f = st.cells[0].eps_bar == 0.5 && st.cells[1].eps_bar == 1.0 && r.corrected &&
                   std::abs(r.augment->correction + 1.0 / 6.0) <= 1e-15 && std::abs(*r.main_part - 1.0) <= 1e-15;
    ok = ok && f;
    detail += f ? " fixture_b=ok" : " fixture_b=MISMATCH";
  }
  return {ok, detail};
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fixtures::scratch_dir("acceptance_determinism");
  const auto d = fixtures::make_dataset(4000, 8);
  const auto feats = fixtures::write(dir, "f.csv", io::features_csv(d.features));
  const auto losses = fixtures::write(dir, "l.csv", io::losses_csv(d.losses));
  const auto aug_feats = gaussian_transform(d.features, 0.1, 5);
  const auto aug_feats_path = fixtures::write(dir, "tf.csv", io::features_csv(aug_feats));
  const auto spec = fixtures::write(dir, "exp.txt", "n = 1000\ntrials = 16\nK = 10\nalpha = 10\n");
  auto p = [&](const std::string& name) { return (dir / name).string(); };

  const char* names[] = {"partition", "certify", "certify-aug", "optimize", "verify-concentration", "synthetic"};
  std::vector<std::string> reference;
  std::string problem;
  for (const char* th : {"1", "4", "8"}) {
    std::vector<std::string> outputs;
    auto must = [&](const std::vector<std::string>& args, const std::string& file) {
      const auto r = fixtures::run_cli(args);
      if (r.code == 2 && problem.empty()) problem = args[0] + ": " + r.err;
      outputs.push_back(io::read_text(file));
    };
    must({"partition", "--features", feats, "--k", "25", "--seed", "11", "--threads", th, "--out", p("a.csv"),
          "--centroids-out", p("c.json"), "--report-out", p("partition.json")},
         p("partition.json"));
    must({"certify", "--losses", losses, "--assignments", p("a.csv"), "--k", "25", "--alpha", "20", "--out",
          p("certify.json")},
         p("certify.json"));
    must({"partition", "--features", aug_feats_path, "--centroids-in", p("c.json"), "--threads", th, "--out",
          p("ta.csv")},
         p("ta.csv"));
    must({"certify-aug", "--losses", losses, "--assignments", p("a.csv"), "--aug-losses", losses,
          "--aug-assignments", p("ta.csv"), "--k", "25", "--alpha", "20", "--sigma", "0.1", "--threads", th, "--out",
          p("aug.json")},
         p("aug.json"));
    must({"optimize", "--losses", losses, "--features", feats, "--k-grid", "10,40", "--alpha-grid", "10,20,40",
          "--seed", "3", "--threads", th, "--out", p("opt.json")},
         p("opt.json"));
    must({"verify-concentration", "--suite", "full", "--trials", "5000", "--seed", "7", "--threads", th,
          "--report-out", p("verify.json")},
         p("verify.json"));
    must({"synthetic", "--spec", spec, "--seed", "9", "--threads", th, "--report-out", p("synthetic.json")},
         p("synthetic.json"));
    if (reference.empty()) {
      reference = outputs;
      continue;
    }
    for (std::size_t i = 0; i < outputs.size(); ++i)
      if (outputs[i] != reference[i] && problem.empty())
        problem = std::string("output #") + std::to_string(i) + " differs at threads=" + th;
  }
  std::string covered;
  for (const char* n : names) covered += std::string(covered.empty() ? "" : ",") + n;
  return {problem.empty(), "subcommands=" + covered + " threads=1,4,8" + (problem.empty() ? "" : " " + problem)};
}

}  // namespace

int main() {
  report(1, "closed-form fidelity", closed_form_fidelity);
  report(2, "uniform-count uncertainty at ImageNet scale", imagenet_arithmetic);
  report(3, "concentration suite, exact mode", exact_suite);
  report(4, "concentration suite, Monte-Carlo mode", mc_suite);
  report(5, "coverage on the Gaussian mixture", coverage);
  report(6, "parameter dynamics", parameter_dynamics);
  report(7, "augmented certificate reduction and fixtures", augment_reduction);
  report(8, "byte-identical reports across thread counts", cli_determinism);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
