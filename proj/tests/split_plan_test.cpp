#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "boostray/errors.hpp"
#include "boostray/split_plan.hpp"
#include "synthetic.hpp"

namespace boostray {
namespace {

using testing::dataset_with_counts;

std::vector<std::size_t> counts_in(const Dataset& ds, const std::vector<std::size_t>& rows) {
  std::vector<std::size_t> counts(ds.n_classes(), 0);
  for (auto r : rows) ++counts[ds.labels()[r]];
  return counts;
}

void expect_partition(const Fold& fold, std::size_t n_rows) {
  EXPECT_TRUE(std::is_sorted(fold.train.begin(), fold.train.end()));
  EXPECT_TRUE(std::is_sorted(fold.test.begin(), fold.test.end()));
  EXPECT_TRUE(std::adjacent_find(fold.train.begin(), fold.train.end()) == fold.train.end());
  EXPECT_TRUE(std::adjacent_find(fold.test.begin(), fold.test.end()) == fold.test.end());
  std::vector<std::size_t> all;
  std::merge(fold.train.begin(), fold.train.end(), fold.test.begin(), fold.test.end(),
             std::back_inserter(all));
  std::vector<std::size_t> expected(n_rows);
  std::iota(expected.begin(), expected.end(), std::size_t{0});
  EXPECT_EQ(all, expected);
}

TEST(KFold, TwoClassFeatureTableGivesEqualStrata) {
  const Dataset ds = dataset_with_counts({500, 125});
  const SplitPlan plan = stratified_kfold(ds, 5, 42);
  ASSERT_EQ(plan.folds.size(), 5u);
  for (const auto& fold : plan.folds) {
    EXPECT_EQ(counts_in(ds, fold.test), (std::vector<std::size_t>{100, 25}));
    expect_partition(fold, ds.n_rows());
  }
}

TEST(KFold, SmallUnevenClasses) {
  const Dataset ds = dataset_with_counts({4, 2});
  const SplitPlan plan = stratified_kfold(ds, 2, 42);
  for (const auto& fold : plan.folds) {
    EXPECT_EQ(counts_in(ds, fold.test), (std::vector<std::size_t>{2, 1}));
  }
}

TEST(KFold, TestFoldsPartitionTheRows) {
  const Dataset ds = dataset_with_counts({13, 7, 9});
  const SplitPlan plan = stratified_kfold(ds, 4, 3);
  std::vector<int> seen(ds.n_rows(), 0);
  for (const auto& fold : plan.folds) {
    for (auto r : fold.test) ++seen[r];
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int n) { return n == 1; }));
}

TEST(KFold, SameSeedSamePlanDifferentSeedDifferentPlan) {
  const Dataset ds = dataset_with_counts({50, 30});
  EXPECT_EQ(stratified_kfold(ds, 5, 42), stratified_kfold(ds, 5, 42));
  EXPECT_NE(stratified_kfold(ds, 5, 42), stratified_kfold(ds, 5, 43));
  EXPECT_EQ(stratified_kfold(ds, 5, 42).seed, 42u);
}

TEST(KFold, ErrorPaths) {
  const Dataset ds = dataset_with_counts({10, 3});
  EXPECT_THROW(stratified_kfold(ds, 1, 42), ConfigurationError);
  EXPECT_THROW(stratified_kfold(ds, 0, 42), ConfigurationError);
  try {
    stratified_kfold(ds, 4, 42);
    FAIL() << "expected StratificationError";
  } catch (const StratificationError& e) {
    EXPECT_NE(std::string(e.what()).find("class1"), std::string::npos) << e.what();
  }
  EXPECT_NO_THROW(stratified_kfold(ds, 3, 42));
}

TEST(KFold, PropertyStratifiedWithinOne) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng() % 9;
    const std::size_t n_classes = 2 + rng() % 4;
    std::vector<std::size_t> counts;
    for (std::size_t c = 0; c < n_classes; ++c) counts.push_back(k + rng() % 60);
    const Dataset ds = dataset_with_counts(counts, 1, trial);
    const SplitPlan plan = stratified_kfold(ds, k, rng());
    ASSERT_EQ(plan.folds.size(), k);
    std::vector<int> seen(ds.n_rows(), 0);
    for (const auto& fold : plan.folds) {
      expect_partition(fold, ds.n_rows());
      const auto per_class = counts_in(ds, fold.test);
      for (std::size_t c = 0; c < n_classes; ++c) {
        const double ideal = static_cast<double>(counts[c]) / static_cast<double>(k);
        EXPECT_LE(std::abs(static_cast<double>(per_class[c]) - ideal), 1.0);
      }
      for (auto r : fold.test) ++seen[r];
    }
    ASSERT_TRUE(std::all_of(seen.begin(), seen.end(), [](int n) { return n == 1; }));
  }
}

TEST(KFold, FoldSizesDifferByAtMostOne) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng() % 6;
    const Dataset ds = dataset_with_counts({k + rng() % 20, k + rng() % 20, k + rng() % 20});
    const SplitPlan plan = stratified_kfold(ds, k, 42);
    std::size_t lo = ds.n_rows(), hi = 0;
    for (const auto& f : plan.folds) {
      lo = std::min(lo, f.test.size());
      hi = std::max(hi, f.test.size());
    }
    EXPECT_LE(hi - lo, 1u);
  }
}

TEST(Holdout, ThreeClassFeatureTable) {
  const Dataset ds = dataset_with_counts({125, 500, 500});
  const SplitPlan plan = stratified_holdout(ds, 0.2, 42);
  ASSERT_EQ(plan.folds.size(), 1u);
  EXPECT_EQ(plan.kind, SplitKind::Holdout);
  const auto& fold = plan.folds[0];
  EXPECT_EQ(fold.test.size(), 225u);
  EXPECT_EQ(counts_in(ds, fold.test), (std::vector<std::size_t>{25, 100, 100}));
  expect_partition(fold, ds.n_rows());
}

TEST(Holdout, SmallestBalancedCase) {
  const Dataset ds = dataset_with_counts({2, 2});
  const Fold fold = stratified_holdout(ds, 0.5, 42).folds[0];
  EXPECT_EQ(counts_in(ds, fold.test), (std::vector<std::size_t>{1, 1}));
}

TEST(Holdout, ErrorPaths) {
  const Dataset ds = dataset_with_counts({2, 10});
  EXPECT_THROW(stratified_holdout(ds, 0.0, 42), ConfigurationError);
  EXPECT_THROW(stratified_holdout(ds, 1.0, 42), ConfigurationError);
  EXPECT_THROW(stratified_holdout(ds, -0.1, 42), ConfigurationError);
  EXPECT_THROW(stratified_holdout(ds, std::nan(""), 42), ConfigurationError);
  EXPECT_THROW(stratified_holdout(ds, 0.1, 42), StratificationError);
  EXPECT_THROW(stratified_holdout(ds, 0.95, 42), StratificationError);
}

TEST(Holdout, PropertyTotalsAndStrata) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> frac(0.15, 0.85);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> counts;
    const std::size_t n_classes = 2 + rng() % 4;
    for (std::size_t c = 0; c < n_classes; ++c) counts.push_back(8 + rng() % 100);
    const Dataset ds = dataset_with_counts(counts, 1, trial);
    const double f = frac(rng);
    const SplitPlan plan = stratified_holdout(ds, f, rng());
    const auto& fold = plan.folds[0];
    expect_partition(fold, ds.n_rows());
    EXPECT_EQ(static_cast<long long>(fold.test.size()),
              std::llround(f * static_cast<double>(ds.n_rows())));
    const auto per_class = counts_in(ds, fold.test);
    for (std::size_t c = 0; c < n_classes; ++c) {
      EXPECT_LE(std::abs(static_cast<double>(per_class[c]) - f * static_cast<double>(counts[c])),
                1.0);
    }
  }
}

TEST(Holdout, Deterministic) {
  const Dataset ds = dataset_with_counts({40, 60});
  EXPECT_EQ(stratified_holdout(ds, 0.3, 7), stratified_holdout(ds, 0.3, 7));
  EXPECT_NE(stratified_holdout(ds, 0.3, 7), stratified_holdout(ds, 0.3, 8));
}

TEST(SeededShuffle, IsAPermutationAndReproducible) {
  std::vector<std::size_t> a(1000);
  std::iota(a.begin(), a.end(), std::size_t{0});
  auto b = a;
  seeded_shuffle(a, 42, 0);
  seeded_shuffle(b, 42, 0);
  EXPECT_EQ(a, b);
  auto c = a;
  std::sort(c.begin(), c.end());
  for (std::size_t i = 0; i < c.size(); ++i) ASSERT_EQ(c[i], i);
  auto d = c;
  seeded_shuffle(d, 42, 1);
  EXPECT_NE(a, d);
}

TEST(SeededShuffle, PositionsAreRoughlyUniform) {
  // Each of 4 items should land in each slot about a quarter of the time.
  std::vector<std::vector<int>> hits(4, std::vector<int>(4, 0));
  const int trials = 8000;
  for (int t = 0; t < trials; ++t) {
    std::vector<std::size_t> v{0, 1, 2, 3};
    seeded_shuffle(v, static_cast<std::uint64_t>(t), 0);
    for (std::size_t pos = 0; pos < 4; ++pos) ++hits[v[pos]][pos];
  }
  for (const auto& row : hits) {
    for (int h : row) EXPECT_NEAR(h, trials / 4, trials / 20);
  }
}

}  // namespace
}  // namespace boostray
