#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "boostray/booster.hpp"
#include "boostray/dataset.hpp"
#include "boostray/metrics.hpp"
#include "boostray/split_plan.hpp"

namespace boostray {

struct ExperimentOptions {
  std::size_t threads = 1;
  /// Class treated as positive in two-class reports. When unset, the first
  /// class whose name contains "covid" (any case), else class 1.
  std::optional<std::size_t> positive;
  /// Collects the model trained on each fold when non-null.
  std::vector<BoostModel>* models_out = nullptr;
};

/// Arithmetic means of every scalar metric across folds.
struct AveragedMetrics {
  std::vector<ClassMetrics> per_class;
  ClassMetrics macro;
  ClassMetrics headline;
  double accuracy = 0.0;
};

struct CvResult {
  std::vector<MetricsReport> per_fold;
  AveragedMetrics averaged;
  SplitPlan plan;
  HyperParams params;
  ObjectiveSpec objective;
};

std::size_t default_positive_class(const std::vector<std::string>& class_names);

/// Trains on fold.train and scores fold.test.
MetricsReport evaluate_fold(const Dataset& dataset, const Fold& fold,
                            const HyperParams& params, const ObjectiveSpec& objective,
                            const ExperimentOptions& options = {});

CvResult run_cv(const Dataset& dataset, const HyperParams& params,
                const ObjectiveSpec& objective, std::size_t k,
                std::uint64_t seed = kDefaultSeed, const ExperimentOptions& options = {});

MetricsReport run_holdout(const Dataset& dataset, const HyperParams& params,
                          const ObjectiveSpec& objective, double test_fraction,
                          std::uint64_t seed = kDefaultSeed,
                          const ExperimentOptions& options = {});

AveragedMetrics average_reports(const std::vector<MetricsReport>& reports);

}  // namespace boostray
