#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tmr/tree.hpp"

namespace tmr {

struct ForestParams {
  int n_trees = 200;
  int mtry = 0;          // 0 selects floor(sqrt(feature count))
  bool bootstrap = true; // false trains every tree on the full sample
};

struct RfModel {
  std::vector<DecisionTree> trees;
  std::vector<std::uint64_t> tree_seeds;
  std::vector<int> classes;
  int n_features = 0;
  int mtry = 0;
  bool bootstrap = true;

  friend bool operator==(const RfModel&, const RfModel&) = default;
};

/// Breiman forest: bootstrap rows per tree, `mtry` candidate features per
/// split, unpruned trees with min_leaf 1. Tree t is seeded by
/// derive_seed(seed, "rf/tree", t), so the forest does not depend on the
/// thread count.
RfModel rf_train(const Matrix& X, std::span<const int> y, const ForestParams& params, std::uint64_t seed);

/// Fraction of trees voting for each class (a tree votes for the majority
/// class of its leaf, ties to the lower class).
ProbabilityVector rf_predict(const RfModel& model, std::span<const double> x);

/// Mean decrease in Gini impurity: per tree, the weighted impurity decrease
/// of every split credited to its feature and divided by the root weight,
/// then averaged over trees. Unused features score 0.
std::vector<double> gini_importance(const RfModel& model);

}  // namespace tmr
