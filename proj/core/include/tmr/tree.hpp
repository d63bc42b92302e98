#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "tmr/matrix.hpp"
#include "tmr/probability.hpp"
#include "tmr/rng.hpp"

namespace tmr {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // rows with x[feature] <= threshold go left
  int left = -1;
  int right = -1;
  double weight = 0.0;    // number of (bootstrap-weighted) training rows
  double impurity = 0.0;  // Gini impurity of the node
  std::vector<double> counts;  // weighted class counts, by class index

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary classification tree; node 0 is the root.
class DecisionTree {
public:
  std::vector<TreeNode> nodes;
  int n_classes = 0;
  int n_features = 0;

  const TreeNode& leaf_for(std::span<const double> x) const;
  std::size_t leaf_count() const;
  std::size_t internal_count() const;
  std::size_t depth() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

/// Column-major copy of a training matrix with labels mapped to class
/// indices; built once and shared by every tree of a forest.
struct TrainingColumns {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // values[col * rows + row]
  std::vector<std::uint32_t> ranks;  // dense rank of each value within its column
  unsigned rank_bits = 0;            // bit width of the largest rank
  std::vector<int> y;          // class index per row
  int n_classes = 0;

  TrainingColumns(const Matrix& X, std::span<const int> class_index, int n_classes);
  double at(std::size_t row, std::size_t col) const { return values[col * rows + row]; }
};

struct GrowParams {
  int min_leaf = 1;
  int mtry = 0;  // candidate features per split; 0 means all
};

/// Greedy Gini growth. Each node takes the (feature, threshold) with the
/// lowest weighted child impurity, thresholds at midpoints of consecutive
/// distinct values, ties to the lower feature id and then the lower
/// threshold. A node stays a leaf when it is pure or no split keeps both
/// children at min_leaf or more. `row_weights` holds the multiplicity of
/// every row (bootstrap counts; zero excludes the row). With mtry > 0 the
/// candidates are drawn without replacement from `rng`, and further
/// features are drawn one at a time only while no candidate can split.
DecisionTree grow_tree(const TrainingColumns& data, std::span<const int> row_weights, const GrowParams& params,
                       Rng* rng = nullptr);

/// Cost-complexity pruning by weakest link: `levels` times, collapse the
/// internal node with the smallest (R(t) - R(T_t)) / (|leaves(T_t)| - 1),
/// R being the resubstitution misclassification rate; ties go to the lower
/// node index. More levels than internal nodes leaves a single root leaf.
void prune_weakest_links(DecisionTree& tree, int levels);

nlohmann::json to_json(const DecisionTree& tree);
DecisionTree tree_from_json(const nlohmann::json& j);

/// Single CART classifier.
struct CartModel {
  DecisionTree tree;
  std::vector<int> classes;
  int pruning_level = 0;
  int min_leaf = 1;

  friend bool operator==(const CartModel&, const CartModel&) = default;
};

CartModel cart_train(const Matrix& X, std::span<const int> y, int pruning_level = 0, int min_leaf = 1);
/// Class frequencies of the leaf reached by x.
ProbabilityVector cart_predict(const CartModel& model, std::span<const double> x);

}  // namespace tmr
