#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace boostray {

/// K x K counts; rows are the true class, columns the predicted class.
class ConfusionMatrix {
 public:
  ConfusionMatrix(std::size_t n_classes, std::vector<std::string> class_names = {});

  std::size_t n_classes() const noexcept { return n_classes_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  std::uint64_t operator()(std::size_t truth, std::size_t predicted) const noexcept {
    return counts_[truth * n_classes_ + predicted];
  }
  std::uint64_t& at(std::size_t truth, std::size_t predicted) noexcept {
    return counts_[truth * n_classes_ + predicted];
  }

  std::uint64_t total() const noexcept;
  std::uint64_t trace() const noexcept;
  std::uint64_t row_sum(std::size_t truth) const noexcept;
  std::uint64_t col_sum(std::size_t predicted) const noexcept;

  /// Adds another matrix of the same shape.
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t n_classes_;
  std::vector<std::string> class_names_;
  std::vector<std::uint64_t> counts_;
};

/// Bits set in ClassMetrics::degenerate when a ratio was 0/0 and reported as 0.
enum DegenerateFlag : unsigned {
  kDegenerateSensitivity = 1u << 0,
  kDegenerateSpecificity = 1u << 1,
  kDegeneratePrecision = 1u << 2,
  kDegenerateF1 = 1u << 3,
};

struct ClassMetrics {
  double sensitivity = 0.0;
  double specificity = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  unsigned degenerate = 0;

  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct MetricsReport {
  std::vector<ClassMetrics> per_class;  // one-vs-rest, class i positive
  ClassMetrics macro;                   // unweighted mean over classes
  double accuracy = 0.0;
  ConfusionMatrix confusion{1};
  /// Set by binary_metrics: the class whose row of per_class is the headline.
  std::optional<std::size_t> positive;

  /// Positive-class metrics for binary reports, macro averages otherwise.
  const ClassMetrics& headline() const noexcept {
    return positive ? per_class[*positive] : macro;
  }
};

ConfusionMatrix confusion(std::span<const std::uint32_t> y_true,
                          std::span<const std::uint32_t> y_pred, std::size_t n_classes,
                          std::vector<std::string> class_names = {});

/// Metrics of `positive` against the other class of a 2 x 2 matrix.
ClassMetrics one_vs_rest(const ConfusionMatrix& cm, std::size_t positive);

MetricsReport binary_metrics(const ConfusionMatrix& cm, std::size_t positive);
MetricsReport multiclass_metrics(const ConfusionMatrix& cm);

}  // namespace boostray
