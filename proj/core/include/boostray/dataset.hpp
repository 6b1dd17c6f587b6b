#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace boostray {

/// Dense row-major matrix of finite single-precision feature values.
///
/// The constructor checks every invariant (non-empty shape, matching
/// storage size, all values finite), so a FeatureMatrix that exists is valid.
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<float> values);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }

  float at(std::size_t row, std::size_t col) const noexcept {
    return values_[row * n_cols_ + col];
  }
  std::span<const float> row(std::size_t r) const noexcept {
    return {values_.data() + r * n_cols_, n_cols_};
  }
  std::span<const float> values() const noexcept { return values_; }

  /// Copy of the given rows, in the given order.
  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t n_rows_;
  std::size_t n_cols_;
  std::vector<float> values_;
};

/// Feature matrix with one class label per row and the class-name table.
class Dataset {
 public:
  Dataset(FeatureMatrix features, std::vector<std::uint32_t> labels,
          std::vector<std::string> class_names);

  const FeatureMatrix& features() const noexcept { return features_; }
  std::span<const std::uint32_t> labels() const noexcept { return labels_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  std::size_t n_rows() const noexcept { return features_.n_rows(); }
  std::size_t n_cols() const noexcept { return features_.n_cols(); }
  std::size_t n_classes() const noexcept { return class_names_.size(); }

  /// Number of rows carrying each class index.
  std::vector<std::size_t> class_counts() const;

  /// Rows restricted to `rows`; classes absent from the subset are an error.
  Dataset subset(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  FeatureMatrix features_;
  std::vector<std::uint32_t> labels_;
  std::vector<std::string> class_names_;
};

/// Plain row-major matrix of doubles used for margins and probabilities.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), values(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
  std::span<double> row(std::size_t r) { return {values.data() + r * cols, cols}; }
};

}  // namespace boostray
