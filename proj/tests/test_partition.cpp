#include "gencert/partition.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "gencert/error.hpp"
#include "gencert/rng.hpp"

namespace gencert {
namespace {

FeatureTable table_1d(const std::vector<double>& xs) {
  FeatureTable t;
  t.dim = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    t.ids.push_back("x" + std::to_string(i));
    t.values.push_back(xs[i]);
  }
  return t;
}

FeatureTable blobs(std::size_t n, std::size_t dim, std::uint64_t seed) {
  FeatureTable t;
  t.dim = dim;
  CounterRng rng(seed, 0);
  for (std::size_t i = 0; i < n; ++i) {
    t.ids.push_back("p" + std::to_string(i));
    const double shift = static_cast<double>(rng.below(5)) * 4.0;
    for (std::size_t j = 0; j < dim; ++j) t.values.push_back(shift + rng.normal());
  }
  return t;
}

Centroids init_1d(std::vector<double> v) {
  Centroids c;
  c.dim = 1;
  c.values = std::move(v);
  return c;
}

TEST(KMeansTest, TwoPairsConverge) {
  const auto f = table_1d({0, 1, 10, 11});
  const auto c = fit_from(f, init_1d({0, 11}));
  EXPECT_DOUBLE_EQ(c.values[0], 0.5);
  EXPECT_DOUBLE_EQ(c.values[1], 10.5);
  EXPECT_EQ(nearest_cells(f, c), (std::vector<std::uint32_t>{0, 0, 1, 1}));
  EXPECT_DOUBLE_EQ(within_cluster_ss(f, c, nearest_cells(f, c)), 1.0);
}

TEST(KMeansTest, TieGoesToLowerIndex) {
  const auto f = table_1d({5});
  EXPECT_EQ(nearest_cells(f, init_1d({4, 6}))[0], 0u);
  EXPECT_EQ(nearest_cells(f, init_1d({6, 4}))[0], 0u);
  EXPECT_EQ(nearest_cells(f, init_1d({6, 4, 5}))[0], 2u);
}

TEST(KMeansTest, SingleClusterIsMean) {
  const auto f = blobs(300, 3, 4);
  const auto c = fit(f, 1, 9);
  for (std::size_t j = 0; j < 3; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f.row(i)[j];
    EXPECT_NEAR(c.values[j], s / 300.0, 1e-12);
  }
}

TEST(KMeansTest, KEqualsNIsBijection) {
  const auto f = blobs(40, 2, 1);
  const auto c = fit(f, 40, 3);
  const auto cells = nearest_cells(f, c);
  EXPECT_EQ(std::set<std::uint32_t>(cells.begin(), cells.end()).size(), 40u);
  EXPECT_EQ(within_cluster_ss(f, c, cells), 0.0);
}

TEST(KMeansTest, KAboveNRejected) {
  const auto f = blobs(5, 2, 1);
  try {
    fit(f, 6, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
  }
}

TEST(KMeansTest, DimensionMismatchRejected) {
  const auto f = blobs(10, 2, 1);
  try {
    nearest_cells(f, init_1d({0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension);
  }
}

TEST(KMeansTest, ObjectiveNonIncreasing) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = blobs(800, 3, 100 + seed);
    const auto c = fit(f, 12, seed, 100);
    ASSERT_FALSE(c.objective_trace.empty());
    for (std::size_t i = 1; i < c.objective_trace.size(); ++i)
      EXPECT_LE(c.objective_trace[i], c.objective_trace[i - 1] * (1 + 1e-12));
  }
}

TEST(KMeansTest, IdenticalAcrossThreadCountsAndRuns) {
  const auto f = blobs(3000, 4, 77);
  const auto ref = fit(f, 25, 42, 50, 1);
  for (unsigned th : {1u, 2u, 4u, 8u}) {
    const auto c = fit(f, 25, 42, 50, th);
    EXPECT_EQ(c.values, ref.values) << th;
    EXPECT_EQ(c.objective_trace, ref.objective_trace);
    EXPECT_EQ(nearest_cells(f, c, th), nearest_cells(f, ref, 1));
  }
}

TEST(KMeansTest, SeedChangesInitialization) {
  EXPECT_NE(sample_without_replacement(1000, 10, 1), sample_without_replacement(1000, 10, 2));
  const auto s = sample_without_replacement(50, 50, 3);
  EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 50u);
}

TEST(KMeansTest, EmptiedClusterReseeded) {
  // A centroid far from all data loses its points on the first step.
  const auto f = table_1d({0, 0.1, 0.2, 5, 5.1, 5.2});
  const auto c = fit_from(f, init_1d({0, 5, 1000}));
  const auto cells = nearest_cells(f, c);
  std::vector<int> seen(3, 0);
  for (auto x : cells) seen[x] = 1;
  EXPECT_EQ(std::accumulate(seen.begin(), seen.end(), 0), 3);
}

TEST(CountsTest, IncludesEmptyCells) {
  Assignment a{{"a", "b", "c"}, {0, 0, 3}};
  const auto c = counts(a, 4);
  EXPECT_EQ(c.counts, (std::vector<std::uint64_t>{2, 0, 0, 1}));
  EXPECT_EQ(c.t_size(), 2u);
}

TEST(IntervalCellsTest, RightClosedCells) {
  const std::vector<double> edges{0.0, 1.0};
  const std::vector<double> xs{-5, 0.0, 0.5, 1.0, 1.0001};
  EXPECT_EQ(interval_cells(xs, edges), (std::vector<std::uint32_t>{0, 0, 1, 1, 2}));
  const std::vector<double> bad{1.0, 0.0};
  EXPECT_THROW(interval_cells(xs, bad), Error);
}

TEST(TablesTest, CellsForRequiresExactIdMatch) {
  SampleTable s{{"a", "b"}, {0.1, 0.2}};
  EXPECT_EQ(cells_for(s, Assignment{{"b", "a"}, {3, 1}}), (std::vector<std::uint32_t>{1, 3}));
  EXPECT_THROW(cells_for(s, Assignment{{"a"}, {0}}), Error);
  EXPECT_THROW(cells_for(s, Assignment{{"a", "b", "c"}, {0, 0, 0}}), Error);
  EXPECT_THROW(validate(SampleTable{{"a", "a"}, {0, 0}}), Error);
}

}  // namespace
}  // namespace gencert
