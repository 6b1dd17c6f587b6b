#include "boostray/booster.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "boostray/errors.hpp"

namespace boostray {

void HyperParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigurationError(what); };
  if (num_rounds < 1) fail("rounds must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0)) fail("eta must lie in (0, 1], got " + std::to_string(eta));
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) fail("gamma must be >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be >= 0");
  if (max_depth < 1) fail("max-depth must be >= 1");
  if (!(min_child_weight >= 0.0) || !std::isfinite(min_child_weight)) {
    fail("min-child-weight must be >= 0");
  }
  if (!(min_gain_eps > 0.0)) fail("min gain epsilon must be > 0");
}

BoostModel::BoostModel(ObjectiveSpec objective, HyperParams params, double base_margin,
                       std::size_t n_features, std::vector<std::string> class_names,
                       std::vector<std::vector<RegressionTree>> trees)
    : objective_(objective),
      params_(params),
      base_margin_(base_margin),
      n_features_(n_features),
      class_names_(std::move(class_names)),
      trees_(std::move(trees)) {
  objective_.validate();
  params_.validate();
  if (!std::isfinite(base_margin_)) throw FormatError("base margin must be finite");
  if (n_features_ == 0) throw FormatError("model must have at least one feature");
  if (class_names_.size() != objective_.n_classes) {
    throw FormatError("model lists " + std::to_string(class_names_.size()) +
                      " class names for " + std::to_string(objective_.n_classes) + " classes");
  }
  if (trees_.size() > params_.num_rounds) {
    throw FormatError("model has more rounds than num_rounds");
  }
  for (std::size_t r = 0; r < trees_.size(); ++r) {
    if (trees_[r].size() != objective_.group_size()) {
      throw FormatError("round " + std::to_string(r) + " has " +
                        std::to_string(trees_[r].size()) + " trees, expected " +
                        std::to_string(objective_.group_size()));
    }
    for (const auto& tree : trees_[r]) tree.validate(n_features_);
  }
}

namespace {

double tree_penalty(const RegressionTree& tree, const HyperParams& params) {
  double squares = 0.0;
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf()) {
      const double scaled = params.eta * node.weight;
      squares += scaled * scaled;
    }
  }
  return params.gamma * static_cast<double>(tree.n_leaves()) + 0.5 * params.lambda * squares;
}

double row_loss(const ObjectiveSpec& objective, std::uint32_t label,
                std::span<const double> margins) {
  return objective.kind == ObjectiveKind::BinaryLogistic ? logistic_loss(label, margins[0])
                                                         : softmax_loss(label, margins);
}

void check_columns(const BoostModel& model, const FeatureMatrix& features) {
  if (features.n_cols() != model.n_features()) {
    throw ShapeError("input has " + std::to_string(features.n_cols()) +
                     " features, model expects " + std::to_string(model.n_features()));
  }
}

}  // namespace

TrainResult train_with_trace(const Dataset& dataset, const HyperParams& params,
                             const ObjectiveSpec& objective, const TrainOptions& options) {
  params.validate();
  objective.validate();
  if (objective.n_classes != dataset.n_classes()) {
    throw ConfigurationError("objective expects " + std::to_string(objective.n_classes) +
                             " classes, dataset has " + std::to_string(dataset.n_classes()));
  }

  const FeatureMatrix& x = dataset.features();
  const std::size_t n = dataset.n_rows();
  std::vector<std::size_t> rows;
  if (options.rows) {
    rows = *options.rows;
    std::vector<bool> used(n, false);
    for (std::size_t r : rows) {
      if (r >= n) throw InputError("training row " + std::to_string(r) + " out of range");
      if (used[r]) throw InputError("training row " + std::to_string(r) + " listed twice");
      used[r] = true;
    }
    if (rows.empty()) throw InputError("training row set is empty");
  } else {
    rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  }

  const std::size_t group = objective.group_size();
  const double base_margin = 0.0;
  const SortedColumns sorted(x);
  const auto labels = dataset.labels();
  const BuildOptions build{.threads = std::max<std::size_t>(options.threads, 1)};

  RealMatrix margins(n, group, base_margin);
  std::vector<std::vector<double>> grad(group, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> hess(group, std::vector<double>(n, 0.0));
  std::vector<double> g_row(group), h_row(group);

  std::vector<std::vector<RegressionTree>> trees;
  trees.reserve(params.num_rounds);
  std::vector<double> history;
  history.reserve(params.num_rounds);
  double penalty = 0.0;

  for (std::size_t round = 0; round < params.num_rounds; ++round) {
    for (std::size_t r : rows) {
      if (objective.kind == ObjectiveKind::BinaryLogistic) {
        const auto gh = grad_hess_logistic(labels[r], margins(r, 0));
        grad[0][r] = gh.grad;
        hess[0][r] = gh.hess;
      } else {
        grad_hess_softmax(labels[r], margins.row(r), g_row, h_row);
        for (std::size_t k = 0; k < group; ++k) {
          grad[k][r] = g_row[k];
          hess[k][r] = h_row[k];
        }
      }
    }

    std::vector<RegressionTree> round_trees;
    round_trees.reserve(group);
    for (std::size_t k = 0; k < group; ++k) {
      round_trees.push_back(build_tree(x, rows, grad[k], hess[k], params, sorted, build));
      penalty += tree_penalty(round_trees.back(), params);
    }
    for (std::size_t r : rows) {
      const auto features = x.row(r);
      for (std::size_t k = 0; k < group; ++k) {
        margins(r, k) += params.eta * round_trees[k].predict(features);
      }
    }
    trees.push_back(std::move(round_trees));

    double loss = 0.0;
    for (std::size_t r : rows) loss += row_loss(objective, labels[r], margins.row(r));
    history.push_back(loss + penalty);
  }

  RealMatrix train_margins(rows.size(), group);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < group; ++k) train_margins(i, k) = margins(rows[i], k);
  }
  return TrainResult{
      BoostModel(objective, params, base_margin, x.n_cols(), dataset.class_names(),
                 std::move(trees)),
      std::move(history), std::move(train_margins)};
}

BoostModel train(const Dataset& dataset, const HyperParams& params,
                 const ObjectiveSpec& objective, const TrainOptions& options) {
  return train_with_trace(dataset, params, objective, options).model;
}

RealMatrix predict_margin(const BoostModel& model, const FeatureMatrix& features) {
  check_columns(model, features);
  const std::size_t group = model.objective().group_size();
  const double eta = model.params().eta;
  RealMatrix out(features.n_rows(), group, model.base_margin());
  for (std::size_t r = 0; r < features.n_rows(); ++r) {
    const auto row = features.row(r);
    for (const auto& round : model.trees()) {
      // Same accumulation order as training, so training margins are reproduced exactly.
      for (std::size_t k = 0; k < group; ++k) out(r, k) += eta * round[k].predict(row);
    }
  }
  return out;
}

RealMatrix predict_proba(const BoostModel& model, const FeatureMatrix& features) {
  const RealMatrix margins = predict_margin(model, features);
  const std::size_t n_classes = model.objective().n_classes;
  RealMatrix out(features.n_rows(), n_classes);
  for (std::size_t r = 0; r < out.rows; ++r) {
    if (model.objective().kind == ObjectiveKind::BinaryLogistic) {
      const double p = sigmoid(margins(r, 0));
      out(r, 0) = 1.0 - p;
      out(r, 1) = p;
    } else {
      softmax(margins.row(r), out.row(r));
    }
  }
  return out;
}

std::vector<std::uint32_t> predict_class(const BoostModel& model, const FeatureMatrix& features) {
  const RealMatrix proba = predict_proba(model, features);
  std::vector<std::uint32_t> out(proba.rows);
  for (std::size_t r = 0; r < proba.rows; ++r) {
    const auto row = proba.row(r);
    out[r] = static_cast<std::uint32_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

double regularized_objective(const BoostModel& model, const Dataset& dataset) {
  const RealMatrix margins = predict_margin(model, dataset.features());
  double loss = 0.0;
  for (std::size_t r = 0; r < dataset.n_rows(); ++r) {
    loss += row_loss(model.objective(), dataset.labels()[r], margins.row(r));
  }
  double penalty = 0.0;
  for (const auto& round : model.trees()) {
    for (const auto& tree : round) penalty += tree_penalty(tree, model.params());
  }
  return loss + penalty;
}

}  // namespace boostray
