#include "boostray/dataset.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "boostray/errors.hpp"

namespace boostray {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Format: return "format error";
    case ErrorKind::Value: return "value error";
    case ErrorKind::Length: return "length error";
    case ErrorKind::Consistency: return "consistency error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Stratification: return "stratification error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Configuration: return "configuration error";
    case ErrorKind::Shape: return "shape error";
    case ErrorKind::Input: return "input error";
  }
  return "error";
}

FeatureMatrix::FeatureMatrix(std::size_t n_rows, std::size_t n_cols,
                             std::vector<float> values)
    : n_rows_(n_rows), n_cols_(n_cols), values_(std::move(values)) {
  if (n_rows_ == 0 || n_cols_ == 0) {
    throw ShapeError("feature matrix must have at least one row and one column");
  }
  if (values_.size() != n_rows_ * n_cols_) {
    throw ShapeError("feature matrix holds " + std::to_string(values_.size()) +
                     " values, expected " + std::to_string(n_rows_ * n_cols_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ValueError("non-finite feature at row " + std::to_string(i / n_cols_) +
                       ", col " + std::to_string(i % n_cols_));
    }
  }
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  std::vector<float> out;
  out.reserve(rows.size() * n_cols_);
  for (std::size_t r : rows) {
    if (r >= n_rows_) throw InputError("row index " + std::to_string(r) + " out of range");
    auto src = row(r);
    out.insert(out.end(), src.begin(), src.end());
  }
  return FeatureMatrix(rows.size(), n_cols_, std::move(out));
}

Dataset::Dataset(FeatureMatrix features, std::vector<std::uint32_t> labels,
                 std::vector<std::string> class_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)) {
  if (labels_.size() != features_.n_rows()) {
    throw ConsistencyError("dataset has " + std::to_string(labels_.size()) +
                           " labels for " + std::to_string(features_.n_rows()) + " rows");
  }
  if (class_names_.empty()) throw ConsistencyError("dataset has no classes");
  std::vector<std::size_t> seen(class_names_.size(), 0);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= class_names_.size()) {
      throw ConsistencyError("label " + std::to_string(labels_[i]) + " at row " +
                             std::to_string(i) + " exceeds class count " +
                             std::to_string(class_names_.size()));
    }
    ++seen[labels_[i]];
  }
  for (std::size_t c = 0; c < seen.size(); ++c) {
    if (seen[c] == 0) {
      throw ConsistencyError("class '" + class_names_[c] + "' has no rows");
    }
  }
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(n_classes(), 0);
  for (auto label : labels_) ++counts[label];
  return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<std::uint32_t> labels;
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= n_rows()) throw InputError("row index " + std::to_string(r) + " out of range");
    labels.push_back(labels_[r]);
  }
  return Dataset(features_.select_rows(rows), std::move(labels), class_names_);
}

}  // namespace boostray
