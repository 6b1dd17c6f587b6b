#include "boostray/split_plan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "boostray/errors.hpp"

namespace boostray {
namespace {

std::vector<std::vector<std::size_t>> members_by_class(const Dataset& dataset) {
  std::vector<std::vector<std::size_t>> members(dataset.n_classes());
  const auto labels = dataset.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
  return members;
}

Fold make_fold(std::vector<std::size_t> test, std::size_t n_rows) {
  std::sort(test.begin(), test.end());
  Fold fold;
  fold.train.reserve(n_rows - test.size());
  std::size_t t = 0;
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (t < test.size() && test[t] == i) {
      ++t;
    } else {
      fold.train.push_back(i);
    }
  }
  fold.test = std::move(test);
  return fold;
}

}  // namespace

void seeded_shuffle(std::vector<std::size_t>& items, std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 gen(seq);
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t reject_below = (0 - bound) % bound;
    std::uint64_t r = gen();
    while (r < reject_below) r = gen();
    std::swap(items[i - 1], items[static_cast<std::size_t>(r % bound)]);
  }
}

SplitPlan stratified_kfold(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigurationError("k-fold needs k >= 2, got " + std::to_string(k));
  auto members = members_by_class(dataset);
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() < k) {
      throw StratificationError("class '" + dataset.class_names()[c] + "' has " +
                                std::to_string(members[c].size()) + " rows, fewer than k=" +
                                std::to_string(k));
    }
  }

  std::vector<std::vector<std::size_t>> tests(k);
  std::size_t offset = 0;
  for (std::size_t c = 0; c < members.size(); ++c) {
    seeded_shuffle(members[c], seed, c);
    for (std::size_t j = 0; j < members[c].size(); ++j) {
      tests[(offset + j) % k].push_back(members[c][j]);
    }
    offset = (offset + members[c].size()) % k;
  }

  SplitPlan plan{.folds = {}, .seed = seed, .kind = SplitKind::KFold};
  plan.folds.reserve(k);
  for (auto& test : tests) plan.folds.push_back(make_fold(std::move(test), dataset.n_rows()));
  return plan;
}

SplitPlan stratified_holdout(const Dataset& dataset, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigurationError("test fraction must lie in (0, 1), got " +
                             std::to_string(test_fraction));
  }
  auto members = members_by_class(dataset);
  const std::size_t n_classes = members.size();

  std::vector<long long> test_count(n_classes);
  std::vector<double> residual(n_classes);
  long long assigned = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    const double exact = test_fraction * static_cast<double>(members[c].size());
    test_count[c] = std::llround(exact);
    residual[c] = exact - static_cast<double>(test_count[c]);
    assigned += test_count[c];
  }
  const long long target = std::llround(test_fraction * static_cast<double>(dataset.n_rows()));
  long long diff = target - assigned;
  if (diff != 0) {
    std::vector<std::size_t> order(n_classes);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Classes rounded furthest in the opposite direction move first.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return diff > 0 ? residual[a] > residual[b] : residual[a] < residual[b];
    });
    const long long step = diff > 0 ? 1 : -1;
    for (std::size_t i = 0; diff != 0; ++i) {
      test_count[order[i % n_classes]] += step;
      diff -= step;
    }
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    const auto size = static_cast<long long>(members[c].size());
    if (test_count[c] < 1 || test_count[c] >= size) {
      throw StratificationError("test fraction " + std::to_string(test_fraction) +
                                " leaves class '" + dataset.class_names()[c] +
                                "' empty on one side of the split");
    }
  }

  std::vector<std::size_t> test;
  test.reserve(static_cast<std::size_t>(target));
  for (std::size_t c = 0; c < n_classes; ++c) {
    seeded_shuffle(members[c], seed, c);
    test.insert(test.end(), members[c].begin(),
                members[c].begin() + static_cast<std::ptrdiff_t>(test_count[c]));
  }
  SplitPlan plan{.folds = {}, .seed = seed, .kind = SplitKind::Holdout};
  plan.folds.push_back(make_fold(std::move(test), dataset.n_rows()));
  return plan;
}

}  // namespace boostray
