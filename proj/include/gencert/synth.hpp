#pragma once

// Synthetic binary-classification problems whose true 0-1 error is known,
// used to measure how often the certificates actually cover it.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gencert/bound_core.hpp"
#include "gencert/tables.hpp"

namespace gencert::synth {

/// Class-conditional law with independent coordinates.
struct Component {
  enum class Kind { gaussian, uniform } kind = Kind::gaussian;
  std::vector<double> a;  // gaussian: means; uniform: lower ends
  std::vector<double> b;  // gaussian: standard deviations; uniform: upper ends
};

/// Predicts class 1 when w . x + bias > 0.
struct Classifier {
  std::vector<double> w;
  double bias = 0.0;

  /// Class 1 iff x_0 > t.
  static Classifier threshold(double t, std::size_t dim = 1);
  int predict(std::span<const double> x) const;
};

struct MixtureSpec {
  std::size_t dim = 1;
  double prior1 = 0.5;                 // Pr(y = 1)
  std::array<Component, 2> classes;
  Classifier classifier;

  /// Equal mixture of N(-1, 1) and N(+1, 1) with the threshold at 0.
  static MixtureSpec gaussian_1d(double separation = 1.0);
  /// Throws invalid_input on a prior outside [0, 1], non-positive spread,
  /// or dimension mismatch.
  void validate() const;
};

struct TrueError {
  double value = 0.0;
  double stderr_ = 0.0;  // 0 for analytic values
  bool analytic = false;
};

double normal_cdf(double x);

/// Analytic for Gaussian classes (any linear rule) and for 1-D uniform
/// classes with a threshold; Monte-Carlo with `mc_samples` draws otherwise.
TrueError true_error(const MixtureSpec& spec, std::size_t mc_samples = 1000000,
                     std::uint64_t seed = 0);
TrueError true_error_mc(const MixtureSpec& spec, std::size_t samples, std::uint64_t seed);

/// n labelled draws; ids are "s<index>". Row i depends only on (seed, i).
struct Sample {
  FeatureTable features;
  std::vector<int> labels;
};
Sample draw(const MixtureSpec& spec, std::size_t n, std::uint64_t seed);

/// 0-1 losses of a classifier on labelled features.
std::vector<double> zero_one_losses(const Classifier& h, const FeatureTable& features,
                                    const std::vector<int>& labels);

/// Marginal CDF of coordinate 0.
double marginal_cdf(const MixtureSpec& spec, double x);
/// x with marginal_cdf(x) = q, by bisection.
double marginal_quantile(const MixtureSpec& spec, double q);
/// Interior edges of K equal-mass intervals on coordinate 0.
std::vector<double> quantile_edges(const MixtureSpec& spec, std::size_t K);
/// True masses of the interval cells defined by `edges` (1-D only).
std::vector<double> interval_masses(const MixtureSpec& spec, const std::vector<double>& edges);

enum class PartitionKind { kmeans, quantile };

struct CoverageOptions {
  std::size_t n = 2000;
  std::size_t trials = 200;
  std::size_t K = 20;
  double delta = 0.01;
  double eps_gamma = 0.04;
  double alpha = 30.0;
  PartitionKind partition = PartitionKind::kmeans;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t max_iters = 50;
  /// Also evaluate the known-mass certificate (1-D specs only).
  bool known_mass_variant = true;
  /// Experimental: fit a 1-D threshold on each S instead of using the fixed
  /// classifier. The certificates are not claimed for this mode.
  bool trained_threshold = false;
};

struct TrialRecord {
  double train_loss = 0.0;
  double sum_sq = 0.0;
  double truth = 0.0;
  double bound = 0.0;
  bool covered = false;
  std::optional<double> bound_general;
  std::optional<bool> covered_general;
};

struct CoverageSummary {
  double coverage_fraction = 0.0;
  double mean_bound = 0.0;
  double mean_gap = 0.0;  // mean of bound - truth
};

struct CoverageResult {
  TrueError truth;
  double guarantee = 0.0;  // 1 - eps_gamma - delta
  double gamma = 0.0;
  CoverageSummary estimated_mass;  // certificate with sample-estimated cell masses
  std::optional<CoverageSummary> known_mass;
  double known_mass_delta1 = 0.0;
  double known_mass_delta2 = 0.0;
  double mean_sum_sq = 0.0;
  std::vector<TrialRecord> trials;
};

/// Per trial: draw S, partition it, certify, compare against the true error.
/// The known-mass variant uses delta1 = eps_gamma and delta2 = delta / 2 with
/// masses integrated over the trial's interval cells.
CoverageResult coverage_run(const MixtureSpec& spec, const CoverageOptions& options);

/// Key=value experiment file: mixture, classifier and coverage options.
struct Experiment {
  MixtureSpec spec;
  CoverageOptions options;
};
Experiment parse_experiment(const std::string& text);

}  // namespace gencert::synth
