#pragma once

// Empirical verification of the concentration inequalities behind the
// certificates. Every check has an exact mode (full enumeration of a finite
// probability space, zero slack) and a Monte-Carlo mode (counter-seeded
// trials, one-sided 3-sigma slack). Exact probabilities are accumulated in
// extended precision and compared in double.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace gencert::conclab {

enum class Mode { automatic, exact, monte_carlo };

/// One row of the check-suite report.
struct CheckResult {
  std::string check;
  std::string params;
  double estimate = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - estimate; may be negative within MC slack
  double slack = 0.0;   // allowance granted on top of the bound (0 in exact mode)
  bool exact = false;
  bool pass = false;
};

/// Finite distribution on [0, 1].
struct DiscreteDist {
  std::vector<double> values;
  std::vector<double> probs;

  static DiscreteDist bernoulli(double p);
  static DiscreteDist point(double v);
  double mean() const;
  void validate() const;  // probs >= 0 summing to 1, values in [0, 1]
};

// ---------------------------------------------------------------------------
// E exp(lambda (x_1 + ... + x_n)^2) <= exp(lambda c n nu (1 + c n nu)) for
// independent x_i in [0, 1] with E x_i <= nu.

struct MgfCheckSpec {
  std::size_t n = 1;
  double nu = 0.5;
  double c = 1.0;
  double lambda = 0.0;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  /// Per-variable laws; empty means n i.i.d. Bernoulli(nu).
  std::vector<DiscreteDist> variables;
  /// When c nu < 1, allow lambda up to ln c / ((1 - c nu)(4n - 3)) instead of
  /// ln c / (4n - 3).
  bool extended_range = false;
  Mode mode = Mode::automatic;
  unsigned threads = 1;
};

/// Largest admissible lambda; +inf when c nu >= 1.
double mgf_lambda_ceiling(std::size_t n, double nu, double c, bool extended_range);

/// Throws range (naming the regime) for an inadmissible lambda.
CheckResult mgf_square_check(const MgfCheckSpec& spec);

// ---------------------------------------------------------------------------
// Tail bound for sums of conditionally independent variables:
// Pr(V - E >= t) <= exp(-2 t^2 / u) and Pr(E - V >= t) <= exp(-2 t^2 / u),
// u = sum_i gamma n mu_i (1 + gamma n mu_i).

enum class CountModel {
  independent_binomial,  // v_i ~ Bin(n, mu_i) independently
  multinomial,           // (v_1..v_m, rest) ~ Mult(n, mu) (application path)
};

enum class TailRegime {
  unified,      // |t| <= u sqrt(ln gamma / (8n - 6)); any t when gamma mu_min >= 1
  small_gamma,  // gamma mu_min < 1, |t| <= u sqrt(ln gamma / (2 (1 - gamma mu_min)(4n - 3)))
  large_gamma,  // gamma mu_min >= 1, any t
};

/// Per-sample losses on the lattice {0, 1/L, ..., 1}.
struct LatticeLoss {
  unsigned levels = 1;         // L
  std::vector<double> probs;   // size L + 1

  static LatticeLoss bernoulli(double q);
  static LatticeLoss constant(unsigned k, unsigned levels);
  double mean() const;
  void validate() const;
};

/// Latent model h: with probability weights[h] every cell i draws its
/// per-sample losses from cells[h][i].
struct LatentModel {
  std::vector<double> weights;
  std::vector<std::vector<LatticeLoss>> cells;

  /// Two latent states: all cells Bernoulli(1/2), and Bernoulli(q_i) spread
  /// over [0.2, 0.8].
  static LatentModel standard(std::size_t m);
  /// Every loss equal to 1/2, so V = E identically.
  static LatentModel degenerate(std::size_t m);
};

struct TailCheckSpec {
  std::size_t m = 1;
  std::size_t n = 1;
  std::vector<double> mu;
  double gamma = 1.0;
  std::vector<double> t_grid;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  CountModel counts = CountModel::independent_binomial;
  TailRegime regime = TailRegime::unified;
  LatentModel latent;  // defaults to LatentModel::standard(m) when empty
  Mode mode = Mode::automatic;
  unsigned threads = 1;
};

struct TailPoint {
  double t = 0.0;
  double upper_tail = 0.0;  // Pr(V - E >= t)
  double lower_tail = 0.0;  // Pr(E - V >= t)
  double bound = 1.0;
  double slack = 0.0;
  bool pass = false;
};

struct TailCheckResult {
  double u = 0.0;
  double t_max = 0.0;  // +inf when unrestricted
  bool exact = false;
  std::vector<TailPoint> points;
  bool pass = false;
};

double tail_u(const std::vector<double>& mu, std::size_t n, double gamma);
/// Admissible deviation ceiling for the regime (+inf when unrestricted).
double tail_t_max(const TailCheckSpec& spec);

/// Throws range for t outside [0, t_max] or a regime whose gamma mu_min
/// condition fails.
TailCheckResult hoeffding_conditional_check(const TailCheckSpec& spec);

// ---------------------------------------------------------------------------
// Conditional Hoeffding lemma: E[exp(lambda (X - E[X|Y])) | Y] <= exp(lambda^2 (b-a)^2 / 8).

struct BoundedLaw {
  enum class Kind { discrete, uniform } kind = Kind::discrete;
  std::vector<double> values;  // discrete support
  std::vector<double> probs;
  double lo = 0.0, hi = 0.0;   // uniform on [lo, hi]

  double mean() const;
};

struct ConditionalSpec {
  double a = 0.0;
  double b = 1.0;
  std::vector<BoundedLaw> x_given_y;  // one law per value of Y
  std::vector<double> lambda_grid;
  std::size_t trials = 100000;        // per (Y, lambda) in MC mode
  std::uint64_t seed = 0;
  Mode mode = Mode::automatic;
};

std::vector<CheckResult> hoeffding_lemma_conditional_check(const ConditionalSpec& spec);

// ---------------------------------------------------------------------------
// Multinomial square-sum estimate:
// Pr(sum p_i^2 > sum (n_i/n)^2 + 2 sqrt((2/n) ln(K/delta))) < delta.

struct MultinomialSpec {
  std::size_t n = 1;
  std::vector<double> p;
  double delta = 0.05;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  Mode mode = Mode::automatic;
  unsigned threads = 1;
};

CheckResult multinomial_square_check(const MultinomialSpec& spec);

/// Pr(gamma/(2n) + (gamma^2/2) sum p_i^2 > u_hat) < delta/2, with u_hat the
/// sample-based quantity of the certificate.
CheckResult uhat_dominance_check(const MultinomialSpec& spec, double gamma);

// ---------------------------------------------------------------------------
// E exp(lambda (a X^2 + b X)) <= exp(c (a + b) nu lambda) for X in [0,1] with
// E X <= nu; lambda >= 0 when c nu >= 1, lambda <= ln c / ((1 - c nu)(a + b))
// otherwise.

struct ExpMixSpec {
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;
  double nu = 0.5;
  double lambda = 0.0;
  DiscreteDist x;  // empty means Bernoulli(nu)
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  Mode mode = Mode::automatic;
};

double exp_mix_lambda_ceiling(double a, double b, double c, double nu);
CheckResult exp_mix_check(const ExpMixSpec& spec);

// ---------------------------------------------------------------------------

enum class Suite { exact, monte_carlo, full };

struct SuiteOptions {
  Suite suite = Suite::full;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Deterministic grid of configurations covering every inequality, in both
/// count models for the tail bound.
std::vector<CheckResult> run_suite(const SuiteOptions& options);

/// Flattens a tail check into report rows (one per t and tail).
std::vector<CheckResult> tail_rows(const TailCheckSpec& spec, const TailCheckResult& result);

}  // namespace gencert::conclab
