#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace boostray {

enum class ObjectiveKind { BinaryLogistic, Softmax };

std::string_view to_string(ObjectiveKind kind) noexcept;
ObjectiveKind objective_kind_from_string(std::string_view name);

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::BinaryLogistic;
  std::size_t n_classes = 2;

  /// Trees per boosting round: one for binary-logistic, n_classes for softmax.
  std::size_t group_size() const noexcept {
    return kind == ObjectiveKind::BinaryLogistic ? 1 : n_classes;
  }

  /// Throws ConfigurationError unless binary-logistic has 2 classes and
  /// softmax has at least 3.
  void validate() const;

  /// binary-logistic for two classes, softmax otherwise.
  static ObjectiveSpec for_classes(std::size_t n_classes);

  friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;
};

inline constexpr double kHessianFloor = 1e-16;

struct GradHess {
  double grad;
  double hess;
};

double sigmoid(double margin) noexcept;

GradHess grad_hess_logistic(std::uint32_t label, double margin) noexcept;

/// Writes per-class gradients and diagonal hessians of the cross-entropy of
/// softmax(margins). All spans must have the same length.
void grad_hess_softmax(std::uint32_t label, std::span<const double> margins,
                       std::span<double> grad, std::span<double> hess) noexcept;

/// Max-subtracted softmax.
void softmax(std::span<const double> margins, std::span<double> out) noexcept;

/// Negative log-likelihood of `label` under the margin(s) of one row.
double logistic_loss(std::uint32_t label, double margin) noexcept;
double softmax_loss(std::uint32_t label, std::span<const double> margins) noexcept;

}  // namespace boostray
