#pragma once

#include <cstddef>

namespace boostray {

/// Booster settings. lambda and min_child_weight default to the values
/// common gradient-boosting libraries use.
struct HyperParams {
  std::size_t num_rounds = 100;
  double eta = 0.44;
  double gamma = 0.0;
  double lambda = 1.0;
  std::size_t max_depth = 6;
  double min_child_weight = 1.0;
  double min_gain_eps = 1e-12;

  /// Throws ConfigurationError naming the first out-of-range field.
  void validate() const;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

}  // namespace boostray
