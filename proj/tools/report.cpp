#include "report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <iomanip>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "boostray/errors.hpp"

namespace boostray::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<const char*, 5> kMetricKeys = {"sensitivity", "specificity", "precision",
                                                    "f1", "accuracy"};
constexpr std::array<const char*, 5> kMetricLabels = {"Sensitivity", "Specificity", "Precision",
                                                      "F1-score", "Accuracy"};

std::array<double, 5> headline_values(const ClassMetrics& m, double accuracy) {
  return {m.sensitivity, m.specificity, m.precision, m.f1, accuracy};
}

std::string percent(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << 100.0 * v;
  return os.str();
}

ordered_json degenerate_list(unsigned flags) {
  ordered_json out = ordered_json::array();
  if (flags & kDegenerateSensitivity) out.push_back("sensitivity");
  if (flags & kDegenerateSpecificity) out.push_back("specificity");
  if (flags & kDegeneratePrecision) out.push_back("precision");
  if (flags & kDegenerateF1) out.push_back("f1");
  return out;
}

ordered_json class_metrics_json(const ClassMetrics& m) {
  ordered_json out;
  out["sensitivity"] = m.sensitivity;
  out["specificity"] = m.specificity;
  out["precision"] = m.precision;
  out["f1"] = m.f1;
  out["degenerate"] = degenerate_list(m.degenerate);
  return out;
}

ordered_json confusion_json(const ConfusionMatrix& cm) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < cm.n_classes(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < cm.n_classes(); ++j) row.push_back(cm(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json params_json(const HyperParams& p) {
  ordered_json out;
  out["num_rounds"] = p.num_rounds;
  out["eta"] = p.eta;
  out["gamma"] = p.gamma;
  out["lambda"] = p.lambda;
  out["max_depth"] = p.max_depth;
  out["min_child_weight"] = p.min_child_weight;
  return out;
}

ordered_json objective_json(const ObjectiveSpec& o) {
  ordered_json out;
  out["kind"] = std::string(to_string(o.kind));
  out["n_classes"] = o.n_classes;
  return out;
}

ordered_json report_json(const MetricsReport& report) {
  const auto& names = report.confusion.class_names();
  ordered_json out;
  out["accuracy"] = report.accuracy;
  out["headline"] = class_metrics_json(report.headline());
  out["macro"] = class_metrics_json(report.macro);
  ordered_json per_class = ordered_json::array();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    ordered_json entry;
    entry["class"] = names[c];
    entry.update(class_metrics_json(report.per_class[c]));
    per_class.push_back(std::move(entry));
  }
  out["per_class"] = std::move(per_class);
  out["confusion"] = confusion_json(report.confusion);
  return out;
}

void write_confusion_text(std::ostream& os, const ConfusionMatrix& cm) {
  std::size_t width = 8;
  for (const auto& name : cm.class_names()) width = std::max(width, name.size() + 2);
  os << std::setw(static_cast<int>(width)) << "";
  for (const auto& name : cm.class_names()) os << std::setw(static_cast<int>(width)) << name;
  os << '\n';
  for (std::size_t i = 0; i < cm.n_classes(); ++i) {
    os << std::left << std::setw(static_cast<int>(width)) << cm.class_names()[i] << std::right;
    for (std::size_t j = 0; j < cm.n_classes(); ++j) {
      os << std::setw(static_cast<int>(width)) << cm(i, j);
    }
    os << '\n';
  }
}

std::string positive_description(const MetricsReport& report) {
  if (!report.positive) return "macro average over classes";
  return "positive class '" + report.confusion.class_names()[*report.positive] + "'";
}

}  // namespace

std::string format_real(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ConfigurationError("unknown report format '" + name + "' (expected text, csv or json)");
}

std::string format_cv_report(const CvResult& result, const std::vector<std::string>& class_names,
                             ReportFormat format) {
  const std::size_t k = result.per_fold.size();
  std::ostringstream os;
  switch (format) {
    case ReportFormat::Text: {
      os << "Cross-validation: " << k << " folds, seed " << result.plan.seed << ", objective "
         << to_string(result.objective.kind) << ", "
         << (k ? positive_description(result.per_fold.front()) : std::string("no folds"))
         << "\n\n";
      os << std::left << std::setw(14) << "Metric (%)" << std::right;
      for (std::size_t f = 0; f < k; ++f) os << std::setw(10) << ("Fold " + std::to_string(f + 1));
      os << std::setw(10) << "Average" << '\n';
      const auto avg = headline_values(result.averaged.headline, result.averaged.accuracy);
      for (std::size_t m = 0; m < kMetricKeys.size(); ++m) {
        os << std::left << std::setw(14) << kMetricLabels[m] << std::right;
        for (const auto& fold : result.per_fold) {
          os << std::setw(10) << percent(headline_values(fold.headline(), fold.accuracy)[m]);
        }
        os << std::setw(10) << percent(avg[m]) << '\n';
      }
      os << "\nConfusion matrices (rows = true class, columns = predicted class)\n";
      for (std::size_t f = 0; f < k; ++f) {
        os << "\nFold " << f + 1 << '\n';
        write_confusion_text(os, result.per_fold[f].confusion);
      }
      break;
    }
    case ReportFormat::Csv: {
      os << "fold";
      for (const char* key : kMetricKeys) os << ',' << key;
      os << '\n';
      for (std::size_t f = 0; f < k; ++f) {
        os << f + 1;
        const auto& fold = result.per_fold[f];
        for (double v : headline_values(fold.headline(), fold.accuracy)) os << ',' << format_real(v);
        os << '\n';
      }
      os << "average";
      for (double v : headline_values(result.averaged.headline, result.averaged.accuracy)) {
        os << ',' << format_real(v);
      }
      os << '\n';
      break;
    }
    case ReportFormat::Json: {
      ordered_json doc;
      doc["kind"] = "cv";
      doc["objective"] = objective_json(result.objective);
      doc["params"] = params_json(result.params);
      doc["k"] = k;
      doc["seed"] = result.plan.seed;
      doc["class_names"] = class_names;
      if (k && result.per_fold.front().positive) {
        doc["positive_class"] = class_names[*result.per_fold.front().positive];
      } else {
        doc["positive_class"] = nullptr;
      }
      ordered_json folds = ordered_json::array();
      for (std::size_t f = 0; f < k; ++f) {
        ordered_json entry;
        entry["fold"] = f + 1;
        entry["n_train"] = result.plan.folds[f].train.size();
        entry["n_test"] = result.plan.folds[f].test.size();
        entry.update(report_json(result.per_fold[f]));
        folds.push_back(std::move(entry));
      }
      doc["folds"] = std::move(folds);
      ordered_json average;
      average["accuracy"] = result.averaged.accuracy;
      average["headline"] = class_metrics_json(result.averaged.headline);
      average["macro"] = class_metrics_json(result.averaged.macro);
      ordered_json per_class = ordered_json::array();
      for (std::size_t c = 0; c < result.averaged.per_class.size(); ++c) {
        ordered_json entry;
        entry["class"] = class_names[c];
        entry.update(class_metrics_json(result.averaged.per_class[c]));
        per_class.push_back(std::move(entry));
      }
      average["per_class"] = std::move(per_class);
      doc["average"] = std::move(average);
      os << doc.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

std::string format_holdout_report(const MetricsReport& report, const HyperParams& params,
                                  const ObjectiveSpec& objective, double test_fraction,
                                  std::uint64_t seed, ReportFormat format) {
  const auto& names = report.confusion.class_names();
  std::ostringstream os;
  switch (format) {
    case ReportFormat::Text: {
      os << "Holdout: test fraction " << format_real(test_fraction) << ", seed " << seed
         << ", objective " << to_string(objective.kind) << ", " << report.confusion.total()
         << " test rows\n\n";
      os << std::left << std::setw(14) << "Metric (%)" << std::right;
      for (const auto& name : names) os << std::setw(std::max<int>(12, static_cast<int>(name.size()) + 2)) << name;
      os << std::setw(12) << "Macro" << '\n';
      for (std::size_t m = 0; m + 1 < kMetricKeys.size(); ++m) {
        os << std::left << std::setw(14) << kMetricLabels[m] << std::right;
        for (std::size_t c = 0; c < report.per_class.size(); ++c) {
          os << std::setw(std::max<int>(12, static_cast<int>(names[c].size()) + 2))
             << percent(headline_values(report.per_class[c], 0.0)[m]);
        }
        os << std::setw(12) << percent(headline_values(report.macro, 0.0)[m]) << '\n';
      }
      os << std::left << std::setw(14) << "Accuracy" << std::right << percent(report.accuracy)
         << '\n';
      if (report.positive) {
        os << "\nHeadline (" << positive_description(report) << "):";
        const auto h = headline_values(report.headline(), report.accuracy);
        for (std::size_t m = 0; m < kMetricKeys.size(); ++m) {
          os << ' ' << kMetricKeys[m] << '=' << percent(h[m]);
        }
        os << '\n';
      }
      os << "\nConfusion matrix (rows = true class, columns = predicted class)\n";
      write_confusion_text(os, report.confusion);
      break;
    }
    case ReportFormat::Csv: {
      os << "metric,scope,value\n";
      for (std::size_t m = 0; m + 1 < kMetricKeys.size(); ++m) {
        for (std::size_t c = 0; c < report.per_class.size(); ++c) {
          os << kMetricKeys[m] << ',' << names[c] << ','
             << format_real(headline_values(report.per_class[c], 0.0)[m]) << '\n';
        }
        os << kMetricKeys[m] << ",macro," << format_real(headline_values(report.macro, 0.0)[m])
           << '\n';
      }
      os << "accuracy,all," << format_real(report.accuracy) << '\n';
      for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = 0; j < names.size(); ++j) {
          os << "confusion," << names[i] << "->" << names[j] << ',' << report.confusion(i, j)
             << '\n';
        }
      }
      break;
    }
    case ReportFormat::Json: {
      ordered_json doc;
      doc["kind"] = "holdout";
      doc["objective"] = objective_json(objective);
      doc["params"] = params_json(params);
      doc["test_fraction"] = test_fraction;
      doc["seed"] = seed;
      doc["class_names"] = names;
      if (report.positive) {
        doc["positive_class"] = names[*report.positive];
      } else {
        doc["positive_class"] = nullptr;
      }
      doc["n_test"] = report.confusion.total();
      doc.update(report_json(report));
      os << doc.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

std::string format_model_summary(const BoostModel& model) {
  std::ostringstream os;
  const auto& p = model.params();
  os << "objective: " << to_string(model.objective().kind) << " ("
     << model.objective().n_classes << " classes)\n";
  os << "classes:";
  for (const auto& name : model.class_names()) os << ' ' << name;
  os << '\n';
  os << "features: " << model.n_features() << '\n';
  os << "params: rounds=" << p.num_rounds << " eta=" << format_real(p.eta)
     << " gamma=" << format_real(p.gamma) << " lambda=" << format_real(p.lambda)
     << " max_depth=" << p.max_depth << " min_child_weight=" << format_real(p.min_child_weight)
     << '\n';
  os << "base margin: " << format_real(model.base_margin()) << '\n';
  os << "tree count: " << model.n_trees() << " (" << model.n_rounds() << " rounds x "
     << model.objective().group_size() << ")\n";

  std::map<std::size_t, std::size_t> histogram;
  std::vector<double> total_gain(model.n_features(), 0.0);
  std::vector<std::size_t> split_count(model.n_features(), 0);
  for (const auto& round : model.trees()) {
    for (const auto& tree : round) {
      ++histogram[tree.n_leaves()];
      for (const auto& node : tree.nodes()) {
        if (node.is_leaf()) continue;
        total_gain[static_cast<std::size_t>(node.feature)] += node.gain;
        ++split_count[static_cast<std::size_t>(node.feature)];
      }
    }
  }
  os << "\nleaf-count histogram\n" << std::setw(8) << "leaves" << std::setw(8) << "trees" << '\n';
  for (const auto& [leaves, trees] : histogram) {
    os << std::setw(8) << leaves << std::setw(8) << trees << '\n';
  }

  std::vector<std::size_t> ranked;
  for (std::size_t f = 0; f < total_gain.size(); ++f) {
    if (split_count[f] > 0) ranked.push_back(f);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](std::size_t a, std::size_t b) { return total_gain[a] > total_gain[b]; });
  if (ranked.size() > 20) ranked.resize(20);
  os << "\ntop features by total gain\n"
     << std::setw(6) << "rank" << std::setw(10) << "feature" << std::setw(26) << "total_gain"
     << std::setw(8) << "splits" << '\n';
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const std::size_t f = ranked[i];
    os << std::setw(6) << i + 1 << std::setw(10) << f << std::setw(26)
       << format_real(total_gain[f]) << std::setw(8) << split_count[f] << '\n';
  }
  return os.str();
}

}  // namespace boostray::cli
