#pragma once

#include <cstdint>
#include <string>

#include "boostray/booster.hpp"
#include "boostray/experiment.hpp"

namespace boostray::cli {

enum class ReportFormat { Text, Csv, Json };

ReportFormat report_format_from_string(const std::string& name);

/// Metrics x folds table with an Average column (text), one row per fold plus
/// an average row (csv), or the full structured result (json).
std::string format_cv_report(const CvResult& result, const std::vector<std::string>& class_names,
                             ReportFormat format);

std::string format_holdout_report(const MetricsReport& report, const HyperParams& params,
                                  const ObjectiveSpec& objective, double test_fraction,
                                  std::uint64_t seed, ReportFormat format);

/// Objective, params, tree count, leaf-count histogram, top-20 features by gain.
std::string format_model_summary(const BoostModel& model);

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

}  // namespace boostray::cli
