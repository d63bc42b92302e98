#include "tmr/forest.hpp"

#include <algorithm>
#include <cmath>

#include "tmr/error.hpp"
#include "tmr/parallel.hpp"

namespace tmr {

RfModel rf_train(const Matrix& X, std::span<const int> y, const ForestParams& params, std::uint64_t seed) {
  if (params.n_trees < 1) throw InvalidArgument("rf_train: n_trees must be >= 1");
  if (X.rows() == 0) throw InvalidArgument("rf_train: no training rows");
  if (y.size() != X.rows()) throw InvalidArgument("rf_train: label count mismatch");
  const int n_features = static_cast<int>(X.cols());
  int mtry = params.mtry > 0 ? params.mtry : std::max(1, static_cast<int>(std::floor(std::sqrt(n_features))));
  if (mtry > n_features) throw InvalidArgument("rf_train: mtry exceeds the feature count");

  RfModel model;
  model.classes = distinct_classes(y);
  model.n_features = n_features;
  model.mtry = mtry;
  model.bootstrap = params.bootstrap;

  std::vector<int> idx(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    idx[i] = static_cast<int>(std::lower_bound(model.classes.begin(), model.classes.end(), y[i]) -
                              model.classes.begin());
  const TrainingColumns data(X, idx, static_cast<int>(model.classes.size()));

  const auto n_trees = static_cast<std::size_t>(params.n_trees);
  model.trees.resize(n_trees);
  model.tree_seeds.resize(n_trees);
  parallel_for(n_trees, [&](std::size_t t) {
    const std::uint64_t tree_seed = derive_seed(seed, "rf/tree", t);
    Rng rng(tree_seed);
    std::vector<int> weights(data.rows, 1);
    if (params.bootstrap) {
      std::fill(weights.begin(), weights.end(), 0);
      std::uniform_int_distribution<std::size_t> pick(0, data.rows - 1);
      for (std::size_t k = 0; k < data.rows; ++k) ++weights[pick(rng)];
    }
    model.trees[t] = grow_tree(data, weights, GrowParams{1, mtry}, &rng);
    model.tree_seeds[t] = tree_seed;
  });
  return model;
}

ProbabilityVector rf_predict(const RfModel& model, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(model.n_features))
    throw InvalidArgument("rf_predict: expected " + std::to_string(model.n_features) + " features");
  ProbabilityVector p;
  p.classes = model.classes;
  p.probs.assign(model.classes.size(), 0.0);
  for (const auto& tree : model.trees) {
    const auto& counts = tree.leaf_for(x).counts;
    const auto vote = std::max_element(counts.begin(), counts.end()) - counts.begin();
    p.probs[static_cast<std::size_t>(vote)] += 1.0;
  }
  for (double& v : p.probs) v /= static_cast<double>(model.trees.size());
  return p;
}

std::vector<double> gini_importance(const RfModel& model) {
  std::vector<double> importance(static_cast<std::size_t>(model.n_features), 0.0);
  for (const auto& tree : model.trees) {
    const double root = tree.nodes.front().weight;
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
      const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
      const double decrease = node.weight * node.impurity - l.weight * l.impurity - r.weight * r.impurity;
      importance[static_cast<std::size_t>(node.feature)] += decrease / root;
    }
  }
  for (double& v : importance) v = std::max(0.0, v / static_cast<double>(model.trees.size()));
  return importance;
}

}  // namespace tmr
