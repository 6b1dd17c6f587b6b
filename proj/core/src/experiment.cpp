#include "boostray/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "boostray/errors.hpp"

namespace boostray {

std::size_t default_positive_class(const std::vector<std::string>& class_names) {
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    std::string lower = class_names[c];
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower.find("covid") != std::string::npos) return c;
  }
  return class_names.size() > 1 ? 1 : 0;
}

MetricsReport evaluate_fold(const Dataset& dataset, const Fold& fold, const HyperParams& params,
                            const ObjectiveSpec& objective, const ExperimentOptions& options) {
  TrainOptions train_options{.threads = options.threads, .rows = fold.train};
  BoostModel model = train(dataset, params, objective, train_options);

  const FeatureMatrix test_x = dataset.features().select_rows(fold.test);
  std::vector<std::uint32_t> truth;
  truth.reserve(fold.test.size());
  for (std::size_t r : fold.test) truth.push_back(dataset.labels()[r]);
  const auto predicted = predict_class(model, test_x);
  if (options.models_out) options.models_out->push_back(std::move(model));

  const ConfusionMatrix cm =
      confusion(truth, predicted, dataset.n_classes(), dataset.class_names());
  if (dataset.n_classes() == 2) {
    const std::size_t positive =
        options.positive.value_or(default_positive_class(dataset.class_names()));
    return binary_metrics(cm, positive);
  }
  return multiclass_metrics(cm);
}

AveragedMetrics average_reports(const std::vector<MetricsReport>& reports) {
  AveragedMetrics avg;
  if (reports.empty()) return avg;
  const auto n = static_cast<double>(reports.size());
  auto accumulate = [n](ClassMetrics& into, const ClassMetrics& m) {
    into.sensitivity += m.sensitivity / n;
    into.specificity += m.specificity / n;
    into.precision += m.precision / n;
    into.f1 += m.f1 / n;
    into.degenerate |= m.degenerate;
  };
  avg.per_class.resize(reports.front().per_class.size());
  double accuracy_sum = 0.0;
  for (const auto& report : reports) {
    for (std::size_t c = 0; c < avg.per_class.size(); ++c) {
      accumulate(avg.per_class[c], report.per_class[c]);
    }
    accumulate(avg.macro, report.macro);
    accumulate(avg.headline, report.headline());
    accuracy_sum += report.accuracy;
  }
  avg.accuracy = accuracy_sum / n;
  return avg;
}

CvResult run_cv(const Dataset& dataset, const HyperParams& params,
                const ObjectiveSpec& objective, std::size_t k, std::uint64_t seed,
                const ExperimentOptions& options) {
  params.validate();
  objective.validate();
  CvResult result;
  result.plan = stratified_kfold(dataset, k, seed);
  result.params = params;
  result.objective = objective;
  for (const auto& fold : result.plan.folds) {
    result.per_fold.push_back(evaluate_fold(dataset, fold, params, objective, options));
  }
  result.averaged = average_reports(result.per_fold);
  return result;
}

MetricsReport run_holdout(const Dataset& dataset, const HyperParams& params,
                          const ObjectiveSpec& objective, double test_fraction,
                          std::uint64_t seed, const ExperimentOptions& options) {
  params.validate();
  objective.validate();
  const SplitPlan plan = stratified_holdout(dataset, test_fraction, seed);
  return evaluate_fold(dataset, plan.folds.front(), params, objective, options);
}

}  // namespace boostray
