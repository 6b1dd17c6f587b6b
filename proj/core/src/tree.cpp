#include "boostray/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <utility>

#include "boostray/errors.hpp"

namespace boostray {
namespace {

inline double gain_of(double gl, double hl, double gr, double hr, double lambda,
                      double gamma) noexcept {
  const double g = gl + gr;
  const double h = hl + hr;
  return 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - g * g / (h + lambda)) -
         gamma;
}

struct Candidate {
  double gain = -std::numeric_limits<double>::infinity();
  std::int32_t feature = kLeaf;
  double threshold = 0.0;

  bool valid() const noexcept { return feature != kLeaf; }
};

// The same partition reached through different features sums its gradients
// in a different order, so equal gains can differ in the last few bits. A
// later candidate must beat the incumbent by more than this relative margin.
constexpr double kTieTolerance = 1e-12;

bool improves(const Candidate& challenger, const Candidate& incumbent) noexcept {
  if (!challenger.valid()) return false;
  if (!incumbent.valid()) return true;
  return challenger.gain >
         incumbent.gain + kTieTolerance * std::max(1.0, std::abs(incumbent.gain));
}

struct ScanState {
  double grad_left = 0.0;
  double hess_left = 0.0;
  float last = 0.0f;
  bool has_last = false;
};

struct NodeSums {
  double grad = 0.0;
  double hess = 0.0;
};

// Best candidate of every open node on features [first, last), written to
// best[f * n_open + slot]. Thresholds of one feature are visited in
// ascending order.
void scan_features(const FeatureMatrix& features, const SortedColumns& sorted,
                   std::span<const std::int32_t> position,
                   std::span<const std::int32_t> slot_of_node,
                   std::span<const NodeSums> open_sums, std::span<const double> grad,
                   std::span<const double> hess, const HyperParams& params,
                   std::size_t first, std::size_t last, std::span<Candidate> best) {
  const std::size_t n_open = open_sums.size();
  std::vector<ScanState> state(n_open);
  for (std::size_t f = first; f < last; ++f) {
    std::fill(state.begin(), state.end(), ScanState{});
    std::span<Candidate> out = best.subspan(f * n_open, n_open);
    for (std::uint32_t r : sorted.column(f)) {
      const std::int32_t node = position[r];
      if (node < 0) continue;
      const std::int32_t slot = slot_of_node[static_cast<std::size_t>(node)];
      if (slot < 0) continue;
      const auto s = static_cast<std::size_t>(slot);
      ScanState& st = state[s];
      const float v = features.at(r, f);
      if (st.has_last && v != st.last) {
        const double hess_right = open_sums[s].hess - st.hess_left;
        if (st.hess_left >= params.min_child_weight && hess_right >= params.min_child_weight) {
          const Candidate c{gain_of(st.grad_left, st.hess_left, open_sums[s].grad - st.grad_left,
                                    hess_right, params.lambda, params.gamma),
                            static_cast<std::int32_t>(f),
                            (static_cast<double>(st.last) + static_cast<double>(v)) * 0.5};
          if (improves(c, out[s])) out[s] = c;
        }
      }
      st.grad_left += grad[r];
      st.hess_left += hess[r];
      st.last = v;
      st.has_last = true;
    }
  }
}

std::vector<Candidate> find_best_splits(const FeatureMatrix& features,
                                        const SortedColumns& sorted,
                                        std::span<const std::int32_t> position,
                                        std::span<const std::int32_t> slot_of_node,
                                        std::span<const NodeSums> open_sums,
                                        std::span<const double> grad,
                                        std::span<const double> hess,
                                        const HyperParams& params, std::size_t threads) {
  const std::size_t n_features = features.n_cols();
  const std::size_t n_open = open_sums.size();
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, n_features);
  std::vector<Candidate> per_feature(n_features * n_open);
  auto run = [&](std::size_t w) {
    scan_features(features, sorted, position, slot_of_node, open_sums, grad, hess, params,
                  n_features * w / workers, n_features * (w + 1) / workers, per_feature);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  // Merging in feature order makes the result independent of the worker count.
  std::vector<Candidate> best(n_open);
  for (std::size_t f = 0; f < n_features; ++f) {
    for (std::size_t s = 0; s < n_open; ++s) {
      if (improves(per_feature[f * n_open + s], best[s])) best[s] = per_feature[f * n_open + s];
    }
  }
  return best;
}

}  // namespace

RegressionTree::RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw FormatError("tree has no nodes");
}

std::size_t RegressionTree::n_leaves() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t RegressionTree::depth() const {
  std::vector<std::size_t> depth_of(nodes_.size(), 0);
  std::size_t deepest = 0;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, depth_of[id]);
    const TreeNode& n = nodes_[id];
    if (n.is_leaf()) continue;
    for (auto child : {n.left, n.right}) {
      depth_of[static_cast<std::size_t>(child)] = depth_of[id] + 1;
      stack.push_back(static_cast<std::size_t>(child));
    }
  }
  return deepest;
}

void RegressionTree::validate(std::size_t n_features) const {
  const auto count = static_cast<std::int64_t>(nodes_.size());
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    const TreeNode& n = nodes_[id];
    const std::string where = "node " + std::to_string(id);
    if (!std::isfinite(n.threshold) || !std::isfinite(n.weight) || !std::isfinite(n.gain)) {
      throw FormatError(where + ": non-finite value");
    }
    if (n.is_leaf()) {
      if (n.left != -1 || n.right != -1) throw FormatError(where + ": leaf with children");
      continue;
    }
    if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= n_features) {
      throw FormatError(where + ": split feature " + std::to_string(n.feature) +
                        " out of range for " + std::to_string(n_features) + " features");
    }
    for (auto child : {n.left, n.right}) {
      if (child <= 0 || child >= count) {
        throw FormatError(where + ": child index " + std::to_string(child) + " out of range");
      }
      const auto c = static_cast<std::size_t>(child);
      if (seen[c]) throw FormatError(where + ": node " + std::to_string(c) + " reached twice");
      seen[c] = true;
      ++reached;
      stack.push_back(c);
    }
  }
  if (reached != nodes_.size()) throw FormatError("tree has unreachable nodes");
}

double leaf_weight(double grad_sum, double hess_sum, double lambda) {
  const double denom = hess_sum + lambda;
  if (!(denom > 0.0)) {
    throw DomainError("leaf weight needs H + lambda > 0, got " + std::to_string(denom));
  }
  return -grad_sum / denom;
}

double split_gain(double grad_left, double hess_left, double grad_right, double hess_right,
                  double lambda, double gamma) {
  if (!(hess_left + lambda > 0.0) || !(hess_right + lambda > 0.0) ||
      !(hess_left + hess_right + lambda > 0.0)) {
    throw DomainError("split gain needs positive H + lambda on both sides and the parent");
  }
  return gain_of(grad_left, hess_left, grad_right, hess_right, lambda, gamma);
}

SortedColumns::SortedColumns(const FeatureMatrix& features)
    : n_rows_(features.n_rows()), n_cols_(features.n_cols()) {
  if (n_rows_ > std::numeric_limits<std::uint32_t>::max()) {
    throw ShapeError("too many rows for 32-bit row indices");
  }
  order_.resize(n_rows_ * n_cols_);
  for (std::size_t f = 0; f < n_cols_; ++f) {
    auto first = order_.begin() + static_cast<std::ptrdiff_t>(f * n_rows_);
    auto last = first + static_cast<std::ptrdiff_t>(n_rows_);
    std::iota(first, last, std::uint32_t{0});
    std::stable_sort(first, last, [&](std::uint32_t a, std::uint32_t b) {
      return features.at(a, f) < features.at(b, f);
    });
  }
}

RegressionTree build_tree(const FeatureMatrix& features, std::span<const std::size_t> row_set,
                          std::span<const double> grad, std::span<const double> hess,
                          const HyperParams& params, const SortedColumns& sorted_columns,
                          const BuildOptions& options) {
  const std::size_t n = features.n_rows();
  if (grad.size() != n || hess.size() != n) {
    throw ShapeError("gradient/hessian length must equal the number of rows");
  }
  if (sorted_columns.n_rows() != n || sorted_columns.n_cols() != features.n_cols()) {
    throw ShapeError("sorted columns were built for a different matrix");
  }
  if (row_set.empty()) throw InputError("cannot build a tree on an empty row set");

  std::vector<std::int32_t> position(n, -1);
  for (std::size_t r : row_set) {
    if (r >= n) throw InputError("row index " + std::to_string(r) + " out of range");
    position[r] = 0;
  }

  std::vector<TreeNode> nodes(1);
  std::vector<NodeSums> sums(1);
  for (std::size_t r = 0; r < n; ++r) {
    if (position[r] == 0) {
      sums[0].grad += grad[r];
      sums[0].hess += hess[r];
    }
  }

  auto make_leaf = [&](std::size_t id) {
    nodes[id].weight = leaf_weight(sums[id].grad, sums[id].hess, params.lambda);
  };

  std::vector<std::int32_t> open{0};
  for (std::size_t depth = 0; !open.empty(); ++depth) {
    if (depth >= params.max_depth) {
      for (auto id : open) make_leaf(static_cast<std::size_t>(id));
      break;
    }

    std::vector<std::int32_t> slot_of_node(nodes.size(), -1);
    std::vector<NodeSums> open_sums;
    open_sums.reserve(open.size());
    for (std::size_t s = 0; s < open.size(); ++s) {
      slot_of_node[static_cast<std::size_t>(open[s])] = static_cast<std::int32_t>(s);
      open_sums.push_back(sums[static_cast<std::size_t>(open[s])]);
    }
    const auto best = find_best_splits(features, sorted_columns, position, slot_of_node,
                                       open_sums, grad, hess, params, options.threads);

    std::vector<std::int32_t> next_open;
    for (std::size_t s = 0; s < open.size(); ++s) {
      const auto id = static_cast<std::size_t>(open[s]);
      const Candidate& c = best[s];
      if (!c.valid() || !(c.gain > params.min_gain_eps)) {
        make_leaf(id);
        continue;
      }
      const auto left = static_cast<std::int32_t>(nodes.size());
      nodes[id].feature = c.feature;
      nodes[id].threshold = c.threshold;
      nodes[id].left = left;
      nodes[id].right = left + 1;
      nodes[id].gain = c.gain;
      nodes.resize(nodes.size() + 2);
      sums.resize(sums.size() + 2);
      next_open.push_back(left);
      next_open.push_back(left + 1);
    }

    for (std::size_t r = 0; r < n; ++r) {
      const std::int32_t node = position[r];
      if (node < 0) continue;
      const TreeNode& t = nodes[static_cast<std::size_t>(node)];
      if (t.is_leaf()) continue;
      const std::int32_t child =
          static_cast<double>(features.at(r, static_cast<std::size_t>(t.feature))) < t.threshold
              ? t.left
              : t.right;
      position[r] = child;
      sums[static_cast<std::size_t>(child)].grad += grad[r];
      sums[static_cast<std::size_t>(child)].hess += hess[r];
    }
    open = std::move(next_open);
  }
  return RegressionTree(std::move(nodes));
}

}  // namespace boostray
