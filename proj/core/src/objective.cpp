#include "boostray/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "boostray/errors.hpp"

namespace boostray {

std::string_view to_string(ObjectiveKind kind) noexcept {
  return kind == ObjectiveKind::BinaryLogistic ? "binary-logistic" : "softmax";
}

ObjectiveKind objective_kind_from_string(std::string_view name) {
  if (name == "binary-logistic") return ObjectiveKind::BinaryLogistic;
  if (name == "softmax") return ObjectiveKind::Softmax;
  throw ConfigurationError("unknown objective '" + std::string(name) +
                           "' (expected binary-logistic or softmax)");
}

void ObjectiveSpec::validate() const {
  if (kind == ObjectiveKind::BinaryLogistic && n_classes != 2) {
    throw ConfigurationError("binary-logistic needs exactly 2 classes, got " +
                             std::to_string(n_classes));
  }
  if (kind == ObjectiveKind::Softmax && n_classes < 3) {
    throw ConfigurationError("softmax needs at least 3 classes, got " +
                             std::to_string(n_classes));
  }
}

ObjectiveSpec ObjectiveSpec::for_classes(std::size_t n_classes) {
  return {n_classes == 2 ? ObjectiveKind::BinaryLogistic : ObjectiveKind::Softmax, n_classes};
}

double sigmoid(double margin) noexcept { return 1.0 / (1.0 + std::exp(-margin)); }

GradHess grad_hess_logistic(std::uint32_t label, double margin) noexcept {
  const double p = sigmoid(margin);
  return {p - static_cast<double>(label), std::max(p * (1.0 - p), kHessianFloor)};
}

void softmax(std::span<const double> margins, std::span<double> out) noexcept {
  const double top = *std::max_element(margins.begin(), margins.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < margins.size(); ++k) {
    out[k] = std::exp(margins[k] - top);
    sum += out[k];
  }
  for (double& v : out) v /= sum;
}

void grad_hess_softmax(std::uint32_t label, std::span<const double> margins,
                       std::span<double> grad, std::span<double> hess) noexcept {
  softmax(margins, grad);
  for (std::size_t k = 0; k < margins.size(); ++k) {
    const double p = grad[k];
    hess[k] = std::max(p * (1.0 - p), kHessianFloor);
    grad[k] = p - (k == label ? 1.0 : 0.0);
  }
}

namespace {
// log(1 + exp(x)) without overflow.
double softplus(double x) noexcept {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
}  // namespace

double logistic_loss(std::uint32_t label, double margin) noexcept {
  return label == 1 ? softplus(-margin) : softplus(margin);
}

double softmax_loss(std::uint32_t label, std::span<const double> margins) noexcept {
  const double top = *std::max_element(margins.begin(), margins.end());
  double sum = 0.0;
  for (double m : margins) sum += std::exp(m - top);
  return top + std::log(sum) - margins[label];
}

}  // namespace boostray
