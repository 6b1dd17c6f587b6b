#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boostray/dataset.hpp"
#include "boostray/objective.hpp"
#include "boostray/params.hpp"
#include "boostray/tree.hpp"

namespace boostray {

/// Additive tree ensemble. trees[round][k] is the tree for output k of a
/// round; leaf weights are stored unscaled and eta is applied when margins
/// are accumulated.
class BoostModel {
 public:
  BoostModel(ObjectiveSpec objective, HyperParams params, double base_margin,
             std::size_t n_features, std::vector<std::string> class_names,
             std::vector<std::vector<RegressionTree>> trees);

  const ObjectiveSpec& objective() const noexcept { return objective_; }
  const HyperParams& params() const noexcept { return params_; }
  double base_margin() const noexcept { return base_margin_; }
  std::size_t n_features() const noexcept { return n_features_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  const std::vector<std::vector<RegressionTree>>& trees() const noexcept { return trees_; }

  std::size_t n_rounds() const noexcept { return trees_.size(); }
  std::size_t n_trees() const noexcept { return trees_.size() * objective_.group_size(); }

  friend bool operator==(const BoostModel&, const BoostModel&) = default;

 private:
  ObjectiveSpec objective_;
  HyperParams params_;
  double base_margin_;
  std::size_t n_features_;
  std::vector<std::string> class_names_;
  std::vector<std::vector<RegressionTree>> trees_;
};

struct TrainOptions {
  std::size_t threads = 1;
  /// Rows to train on; all rows when empty.
  std::optional<std::vector<std::size_t>> rows;
};

struct TrainResult {
  BoostModel model;
  /// Regularized training objective after each round: summed loss plus, for
  /// every tree so far, gamma * leaves + lambda/2 * sum((eta * w)^2).
  std::vector<double> objective_history;
  /// Margins of the training rows as accumulated during training
  /// (rows x group_size, in training-row order).
  RealMatrix train_margins;
};

TrainResult train_with_trace(const Dataset& dataset, const HyperParams& params,
                             const ObjectiveSpec& objective,
                             const TrainOptions& options = {});

BoostModel train(const Dataset& dataset, const HyperParams& params,
                 const ObjectiveSpec& objective, const TrainOptions& options = {});

/// base_margin + eta * sum of routed leaf weights, per output.
RealMatrix predict_margin(const BoostModel& model, const FeatureMatrix& features);
RealMatrix predict_proba(const BoostModel& model, const FeatureMatrix& features);
std::vector<std::uint32_t> predict_class(const BoostModel& model,
                                         const FeatureMatrix& features);

/// Regularized objective of the model on a labelled set, as in TrainResult.
double regularized_objective(const BoostModel& model, const Dataset& dataset);

}  // namespace boostray
