#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "boostray/dataset.hpp"

namespace boostray {

inline constexpr std::uint64_t kDefaultSeed = 42;

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;

  friend bool operator==(const Fold&, const Fold&) = default;
};

enum class SplitKind { KFold, Holdout };

/// Train/test partitions of a dataset. Index lists are strictly increasing.
struct SplitPlan {
  std::vector<Fold> folds;
  std::uint64_t seed = kDefaultSeed;
  SplitKind kind = SplitKind::KFold;

  friend bool operator==(const SplitPlan&, const SplitPlan&) = default;
};

/// Each class is shuffled with its own seeded stream, then dealt round-robin
/// into k folds. The dealing offset carries over between classes so that
/// remainders spread across folds instead of piling onto fold 0.
SplitPlan stratified_kfold(const Dataset& dataset, std::size_t k,
                           std::uint64_t seed = kDefaultSeed);

/// Per-class test size round(fraction * class_total), nudged by one for the
/// classes with the largest rounding residual until the total equals
/// round(fraction * n_rows).
SplitPlan stratified_holdout(const Dataset& dataset, double test_fraction,
                             std::uint64_t seed = kDefaultSeed);

/// Deterministic Fisher-Yates shuffle over a 64-bit Mersenne Twister seeded
/// from (seed, stream). Identical across standard library implementations.
void seeded_shuffle(std::vector<std::size_t>& items, std::uint64_t seed,
                    std::uint64_t stream);

}  // namespace boostray
