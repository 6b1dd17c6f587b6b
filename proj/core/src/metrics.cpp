#include "boostray/metrics.hpp"

#include <numeric>
#include <string>
#include <utility>

#include "boostray/errors.hpp"

namespace boostray {

ConfusionMatrix::ConfusionMatrix(std::size_t n_classes, std::vector<std::string> class_names)
    : n_classes_(n_classes),
      class_names_(std::move(class_names)),
      counts_(n_classes * n_classes, 0) {
  if (class_names_.empty()) {
    for (std::size_t i = 0; i < n_classes_; ++i) class_names_.push_back(std::to_string(i));
  }
  if (class_names_.size() != n_classes_) {
    throw InputError("confusion matrix needs one name per class");
  }
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < n_classes_; ++i) t += (*this)(i, i);
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const noexcept {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < n_classes_; ++j) s += (*this)(truth, j);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const noexcept {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < n_classes_; ++i) s += (*this)(i, predicted);
  return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.n_classes_ != n_classes_) throw InputError("confusion matrix shapes differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

ConfusionMatrix confusion(std::span<const std::uint32_t> y_true,
                          std::span<const std::uint32_t> y_pred, std::size_t n_classes,
                          std::vector<std::string> class_names) {
  if (y_true.size() != y_pred.size()) {
    throw InputError("y_true has " + std::to_string(y_true.size()) + " entries, y_pred has " +
                     std::to_string(y_pred.size()));
  }
  ConfusionMatrix cm(n_classes, std::move(class_names));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] >= n_classes || y_pred[i] >= n_classes) {
      throw InputError("class index out of range at position " + std::to_string(i));
    }
    ++cm.at(y_true[i], y_pred[i]);
  }
  return cm;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den, unsigned flag, unsigned& degenerate) {
  if (den == 0) {
    degenerate |= flag;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

void require_nonempty(const ConfusionMatrix& cm) {
  if (cm.n_classes() == 0 || cm.total() == 0) throw InputError("confusion matrix is empty");
}

MetricsReport report_from(const ConfusionMatrix& cm) {
  MetricsReport report;
  report.confusion = cm;
  const auto k = static_cast<double>(cm.n_classes());
  for (std::size_t c = 0; c < cm.n_classes(); ++c) {
    const ClassMetrics m = one_vs_rest(cm, c);
    report.per_class.push_back(m);
    report.macro.sensitivity += m.sensitivity / k;
    report.macro.specificity += m.specificity / k;
    report.macro.precision += m.precision / k;
    report.macro.f1 += m.f1 / k;
    report.macro.degenerate |= m.degenerate;
  }
  report.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
  return report;
}

}  // namespace

ClassMetrics one_vs_rest(const ConfusionMatrix& cm, std::size_t positive) {
  if (positive >= cm.n_classes()) throw InputError("positive class out of range");
  const std::uint64_t tp = cm(positive, positive);
  const std::uint64_t fn = cm.row_sum(positive) - tp;
  const std::uint64_t fp = cm.col_sum(positive) - tp;
  const std::uint64_t tn = cm.total() - tp - fn - fp;

  ClassMetrics m;
  m.sensitivity = ratio(tp, tp + fn, kDegenerateSensitivity, m.degenerate);
  m.specificity = ratio(tn, tn + fp, kDegenerateSpecificity, m.degenerate);
  m.precision = ratio(tp, tp + fp, kDegeneratePrecision, m.degenerate);
  const double denom = m.precision + m.sensitivity;
  if (denom > 0.0) {
    m.f1 = 2.0 * m.precision * m.sensitivity / denom;
  } else {
    m.degenerate |= kDegenerateF1;
  }
  return m;
}

MetricsReport binary_metrics(const ConfusionMatrix& cm, std::size_t positive) {
  if (cm.n_classes() != 2) {
    throw ShapeError("binary metrics need a 2 x 2 matrix, got " +
                     std::to_string(cm.n_classes()) + " classes");
  }
  if (positive >= 2) throw InputError("positive class must be 0 or 1");
  require_nonempty(cm);
  MetricsReport report = report_from(cm);
  report.positive = positive;
  return report;
}

MetricsReport multiclass_metrics(const ConfusionMatrix& cm) {
  require_nonempty(cm);
  if (cm.n_classes() < 2) throw ShapeError("multiclass metrics need at least 2 classes");
  return report_from(cm);
}

}  // namespace boostray
