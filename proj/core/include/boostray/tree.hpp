#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "boostray/dataset.hpp"
#include "boostray/params.hpp"

namespace boostray {

inline constexpr std::int32_t kLeaf = -1;

/// One node of a flat regression tree. Leaves have feature == kLeaf and
/// children == -1; internal nodes carry a zero weight.
struct TreeNode {
  std::int32_t feature = kLeaf;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double weight = 0.0;
  double gain = 0.0;

  bool is_leaf() const noexcept { return feature == kLeaf; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary tree of axis-aligned splits. Node 0 is the root; a row goes left
/// when its value is strictly below the threshold.
class RegressionTree {
 public:
  RegressionTree() : nodes_{TreeNode{}} {}
  explicit RegressionTree(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t n_leaves() const noexcept;
  std::size_t depth() const;

  std::size_t leaf_index(std::span<const float> row) const noexcept {
    std::size_t id = 0;
    while (!nodes_[id].is_leaf()) {
      const TreeNode& n = nodes_[id];
      id = static_cast<double>(row[static_cast<std::size_t>(n.feature)]) < n.threshold
               ? static_cast<std::size_t>(n.left)
               : static_cast<std::size_t>(n.right);
    }
    return id;
  }
  double predict(std::span<const float> row) const noexcept {
    return nodes_[leaf_index(row)].weight;
  }

  /// Throws FormatError unless the nodes form a proper binary tree rooted at
  /// node 0 whose split features are all below n_features.
  void validate(std::size_t n_features) const;

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Optimal leaf score -G / (H + lambda). Throws DomainError if H + lambda <= 0.
double leaf_weight(double grad_sum, double hess_sum, double lambda);

/// Loss reduction of splitting a leaf into (L, R), minus gamma.
double split_gain(double grad_left, double hess_left, double grad_right,
                  double hess_right, double lambda, double gamma);

/// Per-feature row orderings by ascending value (ties by row index),
/// computed once per feature matrix and shared by every tree.
class SortedColumns {
 public:
  explicit SortedColumns(const FeatureMatrix& features);

  std::span<const std::uint32_t> column(std::size_t feature) const noexcept {
    return {order_.data() + feature * n_rows_, n_rows_};
  }
  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }

 private:
  std::size_t n_rows_;
  std::size_t n_cols_;
  std::vector<std::uint32_t> order_;
};

struct BuildOptions {
  /// Worker threads for the per-feature split scan; results do not depend on it.
  std::size_t threads = 1;
};

/// Exact-greedy, level-wise tree growth over the rows in `row_set`.
///
/// Every feature of every open node is scanned in ascending value order.
/// Candidate thresholds are midpoints between consecutive distinct values,
/// and only candidates leaving at least min_child_weight hessian on both
/// sides are considered. A node splits when its best gain exceeds
/// min_gain_eps and its depth is below max_depth. Ties, judged with a
/// relative tolerance of 1e-12, keep the lowest feature index, then the
/// lowest threshold.
RegressionTree build_tree(const FeatureMatrix& features,
                          std::span<const std::size_t> row_set,
                          std::span<const double> grad,
                          std::span<const double> hess,
                          const HyperParams& params,
                          const SortedColumns& sorted_columns,
                          const BuildOptions& options = {});

}  // namespace boostray
