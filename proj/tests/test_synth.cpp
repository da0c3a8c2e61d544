#include "gencert/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "gencert/augment.hpp"
#include "gencert/error.hpp"
#include "gencert/partition.hpp"
#include "gencert/rng.hpp"

namespace gencert::synth {
namespace {

constexpr double kPhiMinusOne = 0.15865525393145705;

TEST(TrueErrorTest, GaussianMixtureAnalytic) {
  EXPECT_NEAR(normal_cdf(-1.0), kPhiMinusOne, 1e-16);
  const auto e = true_error(MixtureSpec::gaussian_1d());
  EXPECT_TRUE(e.analytic);
  EXPECT_NEAR(e.value, kPhiMinusOne, 1e-15);
}

TEST(TrueErrorTest, MonteCarloAgreesWithAnalytic) {
  const auto e = true_error_mc(MixtureSpec::gaussian_1d(), 1000000, 12);
  EXPECT_FALSE(e.analytic);
  EXPECT_NEAR(e.value, 0.1587, 0.0004);
  EXPECT_GT(e.stderr_, 0.0);
}

TEST(TrueErrorTest, UniformThresholdAnalytic) {
  MixtureSpec s;
  s.classes[0] = {Component::Kind::uniform, {0.0}, {2.0}};
  s.classes[1] = {Component::Kind::uniform, {1.0}, {3.0}};
  s.classifier = Classifier::threshold(1.5);
  const auto e = true_error(s);
  EXPECT_TRUE(e.analytic);
  EXPECT_DOUBLE_EQ(e.value, 0.25);
}

TEST(TrueErrorTest, MultivariateLinearRule) {
  MixtureSpec s;
  s.dim = 2;
  s.classes[0] = {Component::Kind::gaussian, {-1.0, 0.0}, {1.0, 1.0}};
  s.classes[1] = {Component::Kind::gaussian, {1.0, 0.0}, {1.0, 1.0}};
  s.classifier = Classifier::threshold(0.0, 2);
  EXPECT_NEAR(true_error(s).value, kPhiMinusOne, 1e-15);
  s.classes[0].kind = s.classes[1].kind = Component::Kind::uniform;
  s.classes[0].a = {-2, 0};
  s.classes[0].b = {0, 1};
  s.classes[1].a = {0, 0};
  s.classes[1].b = {2, 1};
  const auto e = true_error(s, 20000, 1);
  EXPECT_FALSE(e.analytic);
  EXPECT_EQ(e.value, 0.0);
}

TEST(MarginalTest, QuantilesInvertCdf) {
  const auto s = MixtureSpec::gaussian_1d();
  for (double q : {0.01, 0.25, 0.5, 0.9}) EXPECT_NEAR(marginal_cdf(s, marginal_quantile(s, q)), q, 1e-12);
  const auto edges = quantile_edges(s, 8);
  ASSERT_EQ(edges.size(), 7u);
  for (double p : interval_masses(s, edges)) EXPECT_NEAR(p, 0.125, 1e-12);
}

TEST(DrawTest, RowsDependOnlyOnSeedAndIndex) {
  const auto s = MixtureSpec::gaussian_1d();
  const auto a = draw(s, 100, 4);
  const auto b = draw(s, 300, 4);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(a.features.values[i], b.features.values[i]);
    EXPECT_EQ(a.labels[i], b.labels[i]);
  }
  EXPECT_EQ(a.features.ids[7], "s7");
}

TEST(CoverageTest, SeparableSpecAlwaysCovered) {
  MixtureSpec s;
  s.classes[0] = {Component::Kind::uniform, {-2.0}, {-1.0}};
  s.classes[1] = {Component::Kind::uniform, {1.0}, {2.0}};
  s.classifier = Classifier::threshold(0.0);
  CoverageOptions o;
  o.n = 500;
  o.trials = 20;
  o.K = 10;
  o.alpha = 10;
  const auto r = coverage_run(s, o);
  EXPECT_EQ(r.truth.value, 0.0);
  EXPECT_EQ(r.estimated_mass.coverage_fraction, 1.0);
  ASSERT_TRUE(r.known_mass.has_value());
  EXPECT_EQ(r.known_mass->coverage_fraction, 1.0);
}

TEST(CoverageTest, GaussianMixtureMeetsGuarantee) {
  CoverageOptions o;
  o.trials = 50;
  o.partition = PartitionKind::quantile;
  const auto r = coverage_run(MixtureSpec::gaussian_1d(), o);
  EXPECT_NEAR(r.guarantee, 0.95, 1e-15);
  EXPECT_GE(r.estimated_mass.coverage_fraction, r.guarantee);
  EXPECT_EQ(r.trials.size(), 50u);
  EXPECT_DOUBLE_EQ(r.known_mass_delta1, 0.04);
  EXPECT_DOUBLE_EQ(r.known_mass_delta2, 0.005);
}

TEST(CoverageTest, IdenticalAcrossThreadCounts) {
  CoverageOptions o;
  o.n = 400;
  o.trials = 8;
  o.K = 8;
  o.alpha = 10;
  const auto ref = coverage_run(MixtureSpec::gaussian_1d(), o);
  for (unsigned th : {2u, 4u}) {
    o.threads = th;
    const auto r = coverage_run(MixtureSpec::gaussian_1d(), o);
    ASSERT_EQ(r.trials.size(), ref.trials.size());
    for (std::size_t i = 0; i < r.trials.size(); ++i) EXPECT_EQ(r.trials[i].bound, ref.trials[i].bound);
  }
}

TEST(CoverageTest, GapShrinksWithSampleSize) {
  CoverageOptions o;
  o.trials = 10;
  o.alpha = 10;
  o.known_mass_variant = false;
  double prev = INFINITY;
  for (std::size_t n : {500, 2000, 8000}) {
    o.n = n;
    const auto r = coverage_run(MixtureSpec::gaussian_1d(), o);
    EXPECT_LT(r.estimated_mass.mean_gap, prev) << n;
    prev = r.estimated_mass.mean_gap;
  }
}

TEST(CoverageTest, RejectsBadOptions) {
  CoverageOptions o;
  o.K = 0;
  EXPECT_THROW(coverage_run(MixtureSpec::gaussian_1d(), o), Error);
  o.K = 5;
  o.n = 4;
  EXPECT_THROW(coverage_run(MixtureSpec::gaussian_1d(), o), Error);
}

// Noise moves transformed samples away from their originals, so the augmented
// main part grows with sigma on average.
TEST(AugmentTrendTest, MainPartGrowsWithNoise) {
  const auto spec = MixtureSpec::gaussian_1d();
  const std::vector<double> sigmas{0.0, 0.05, 0.1, 0.15, 0.2};
  std::vector<double> mean_main(sigmas.size(), 0.0);
  const std::size_t K = 20, n = 4000;
  const auto edges = quantile_edges(spec, K);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = draw(spec, n, seed);
    const auto losses = zero_one_losses(spec.classifier, s.features, s.labels);
    const auto cells = interval_cells(s.features.values, edges);
    const auto counts = CellCounts::from_cells(cells, K);
    const auto p = BoundParams::from_eps_gamma(n, K, 0.01, 10, 0.04, 1.0);
    for (std::size_t j = 0; j < sigmas.size(); ++j) {
      const auto t = gaussian_transform(s.features, sigmas[j], derive_seed(seed, 1));
      const auto aug_losses = zero_one_losses(spec.classifier, t, s.labels);
      const auto aug_cells = interval_cells(t.values, edges);
      mean_main[j] += *certify_aug(losses, cells, aug_losses, aug_cells, counts, p).main_part / 5.0;
    }
  }
  for (std::size_t j = 1; j < sigmas.size(); ++j) EXPECT_GE(mean_main[j], mean_main[j - 1] - 0.005) << j;
  EXPECT_GT(mean_main.back(), mean_main.front());
}

TEST(ExperimentFileTest, ParsesKeys) {
  const auto ex = parse_experiment(
      "# mixture\n"
      "prior1 = 0.3\n"
      "class0.mean = -2\n"
      "class1.mean = 2\n"
      "class0.sd = 1\n"
      "class1.sd = 1\n"
      "threshold = 0.5\n"
      "n = 1000\n"
      "trials = 7\n"
      "K = 12\n"
      "partition = quantile\n"
      "known_mass = false\n");
  EXPECT_DOUBLE_EQ(ex.spec.prior1, 0.3);
  EXPECT_EQ(ex.spec.classes[0].a, std::vector<double>{-2.0});
  EXPECT_EQ(ex.options.n, 1000u);
  EXPECT_EQ(ex.options.trials, 7u);
  EXPECT_EQ(ex.options.K, 12u);
  EXPECT_EQ(ex.options.partition, PartitionKind::quantile);
  EXPECT_FALSE(ex.options.known_mass_variant);
  EXPECT_DOUBLE_EQ(ex.spec.classifier.bias, -0.5);
}

TEST(ExperimentFileTest, ErrorsCarryLineNumbers) {
  const std::pair<std::string, std::size_t> cases[] = {
      {"n = 10\nn = 20\n", 2},
      {"n = 10\n\nbogus = 1\n", 3},
      {"trials = 2.5\n", 1},
      {"just text\n", 1},
      {"n = 10\npartition = voronoi\n", 2},
  };
  for (const auto& [text, line] : cases) {
    try {
      parse_experiment(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::parse);
      EXPECT_EQ(e.line(), line) << text;
    }
  }
  EXPECT_THROW(parse_experiment("prior1 = 1.5\n"), Error);
}

}  // namespace
}  // namespace gencert::synth
