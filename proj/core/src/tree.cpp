#include "tmr/tree.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

#include "tmr/error.hpp"

namespace tmr {

TrainingColumns::TrainingColumns(const Matrix& X, std::span<const int> class_index, int classes)
    : rows(X.rows()), cols(X.cols()), values(X.rows() * X.cols()), y(class_index.begin(), class_index.end()),
      n_classes(classes) {
  if (class_index.size() != X.rows()) throw InvalidArgument("TrainingColumns: label count mismatch");
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = X.row(r);
    for (std::size_t c = 0; c < cols; ++c) values[c * rows + r] = row[c];
  }
  ranks.resize(values.size());
  std::vector<std::uint32_t> order(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    const double* col = values.data() + c * rows;
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    std::uint32_t rank = 0;
    for (std::size_t k = 0; k < rows; ++k) {
      if (k > 0 && col[order[k - 1]] < col[order[k]]) ++rank;
      ranks[c * rows + order[k]] = rank;
    }
    rank_bits = std::max(rank_bits, static_cast<unsigned>(std::bit_width(rank)));
  }
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  const TreeNode* node = &nodes.front();
  while (!node->is_leaf())
    node = &nodes[static_cast<std::size_t>(x[static_cast<std::size_t>(node->feature)] <= node->threshold
                                               ? node->left
                                               : node->right)];
  return *node;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::internal_count() const { return nodes.size() - leaf_count(); }

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> depth(nodes.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {  // children always follow parents
    best = std::max(best, depth[i]);
    if (!nodes[i].is_leaf()) {
      depth[static_cast<std::size_t>(nodes[i].left)] = depth[i] + 1;
      depth[static_cast<std::size_t>(nodes[i].right)] = depth[i] + 1;
    }
  }
  return best;
}

namespace {

double gini(const std::vector<double>& counts, double weight) {
  if (weight <= 0.0) return 0.0;
  double sq = 0.0;
  for (double c : counts) sq += c * c;
  return 1.0 - sq / (weight * weight);
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double score = -std::numeric_limits<double>::infinity();
};

class TreeGrower {
public:
  TreeGrower(const TrainingColumns& data, std::span<const int> weights, const GrowParams& params, Rng* rng)
      : data_(data), weights_(weights), params_(params), rng_(rng) {
    if (weights.size() != data.rows) throw InvalidArgument("grow_tree: weight count mismatch");
    for (std::size_t r = 0; r < data.rows; ++r)
      if (weights[r] > 0) index_.push_back(static_cast<std::uint32_t>(r));
    if (index_.empty()) throw InvalidArgument("grow_tree: no training rows");
    features_.resize(data.cols);
    std::iota(features_.begin(), features_.end(), 0);
    buffer_.resize(index_.size());
    rank_bits_ = data.rank_bits;
    left_counts_.resize(static_cast<std::size_t>(data.n_classes));
    right_counts_.resize(static_cast<std::size_t>(data.n_classes));
  }

  DecisionTree grow() {
    DecisionTree tree;
    tree.n_classes = data_.n_classes;
    tree.n_features = static_cast<int>(data_.cols);
    struct Pending {
      int node;
      std::size_t begin, end;
    };
    tree.nodes.push_back(make_node(0, index_.size()));
    std::vector<Pending> stack{{0, 0, index_.size()}};
    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();
      const SplitChoice split = best_split(tree.nodes[static_cast<std::size_t>(p.node)], p.begin, p.end);
      if (split.feature < 0) continue;

      const auto f = static_cast<std::size_t>(split.feature);
      auto mid_it = std::partition(index_.begin() + static_cast<std::ptrdiff_t>(p.begin),
                                   index_.begin() + static_cast<std::ptrdiff_t>(p.end),
                                   [&](std::uint32_t r) { return data_.at(r, f) <= split.threshold; });
      const auto mid = static_cast<std::size_t>(mid_it - index_.begin());

      const int left = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(make_node(p.begin, mid));
      tree.nodes.push_back(make_node(mid, p.end));
      TreeNode& node = tree.nodes[static_cast<std::size_t>(p.node)];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = left;
      node.right = left + 1;
      stack.push_back({left + 1, mid, p.end});
      stack.push_back({left, p.begin, mid});
    }
    return tree;
  }

private:
  TreeNode make_node(std::size_t begin, std::size_t end) const {
    TreeNode node;
    node.counts.assign(static_cast<std::size_t>(data_.n_classes), 0.0);
    for (std::size_t k = begin; k < end; ++k) {
      const auto r = index_[k];
      const double w = weights_[r];
      node.counts[static_cast<std::size_t>(data_.y[r])] += w;
      node.weight += w;
    }
    node.impurity = gini(node.counts, node.weight);
    return node;
  }

  SplitChoice best_split(const TreeNode& node, std::size_t begin, std::size_t end) {
    SplitChoice best;
    if (node.impurity <= 0.0) return best;
    if (node.weight < 2.0 * params_.min_leaf) return best;

    const std::size_t n_features = data_.cols;
    const bool sample = params_.mtry > 0 && static_cast<std::size_t>(params_.mtry) < n_features;
    if (!sample) {
      for (std::size_t f = 0; f < n_features; ++f) evaluate(f, begin, end, node, best);
      return best;
    }

    // Partial Fisher-Yates over the persistent permutation.
    const auto mtry = static_cast<std::size_t>(params_.mtry);
    auto draw = [&](std::size_t pos) {
      std::uniform_int_distribution<std::size_t> pick(pos, n_features - 1);
      std::swap(features_[pos], features_[pick(*rng_)]);
      return features_[pos];
    };
    candidates_.clear();
    for (std::size_t k = 0; k < mtry; ++k) candidates_.push_back(draw(k));
    std::sort(candidates_.begin(), candidates_.end());
    for (std::size_t f : candidates_) evaluate(f, begin, end, node, best);
    for (std::size_t k = mtry; best.feature < 0 && k < n_features; ++k) evaluate(draw(k), begin, end, node, best);
    return best;
  }

  // Keys are (rank << 32 | row); large nodes use a two-pass LSD radix sort
  // on the rank, which keeps the row order stable within equal ranks.
  void sort_keys(std::size_t n) {
    if (n < 256 || rank_bits_ > 22) {
      std::sort(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(n));
      return;
    }
    const unsigned passes = rank_bits_ <= 11 ? 1 : 2;
    const unsigned bits = (rank_bits_ + passes - 1) / passes;
    const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
    scratch_.resize(buffer_.size());
    counts_.resize(std::size_t{1} << bits);
    std::uint64_t* src = buffer_.data();
    std::uint64_t* dst = scratch_.data();
    for (unsigned pass = 0; pass < passes; ++pass) {
      const unsigned shift = 32 + pass * bits;
      std::fill(counts_.begin(), counts_.end(), 0);
      for (std::size_t k = 0; k < n; ++k) ++counts_[(src[k] >> shift) & mask];
      std::size_t sum = 0;
      for (auto& c : counts_) {
        const std::size_t t = c;
        c = sum;
        sum += t;
      }
      for (std::size_t k = 0; k < n; ++k) dst[counts_[(src[k] >> shift) & mask]++] = src[k];
      std::swap(src, dst);
    }
    if (src != buffer_.data()) std::copy(src, src + n, buffer_.data());
  }

  void evaluate(std::size_t f, std::size_t begin, std::size_t end, const TreeNode& node, SplitChoice& best) {
    // Sort (rank, row) pairs packed into one integer key.
    const std::size_t n = end - begin;
    const std::uint32_t* rank = data_.ranks.data() + f * data_.rows;
    for (std::size_t k = 0; k < n; ++k) {
      const auto r = index_[begin + k];
      buffer_[k] = (static_cast<std::uint64_t>(rank[r]) << 32) | r;
    }
    sort_keys(n);
    if ((buffer_[0] >> 32) == (buffer_[n - 1] >> 32)) return;  // constant in this node

    std::fill(left_counts_.begin(), left_counts_.end(), 0.0);
    right_counts_ = node.counts;
    double wl = 0.0;
    const double min_leaf = params_.min_leaf;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const auto r = static_cast<std::uint32_t>(buffer_[k]);
      const double w = weights_[r];
      const auto cls = static_cast<std::size_t>(data_.y[r]);
      left_counts_[cls] += w;
      right_counts_[cls] -= w;
      wl += w;
      if ((buffer_[k] >> 32) == (buffer_[k + 1] >> 32)) continue;
      const double wr = node.weight - wl;
      if (wl < min_leaf || wr < min_leaf) continue;
      double sl = 0.0, sr = 0.0;
      for (std::size_t c = 0; c < left_counts_.size(); ++c) {
        sl += left_counts_[c] * left_counts_[c];
        sr += right_counts_[c] * right_counts_[c];
      }
      const double score = sl / wl + sr / wr;  // larger = purer children
      if (score > best.score) {
        const double lo = data_.at(r, f);
        const double hi = data_.at(static_cast<std::uint32_t>(buffer_[k + 1]), f);
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        best = {static_cast<int>(f), threshold, score};
      }
    }
  }

  const TrainingColumns& data_;
  std::span<const int> weights_;
  GrowParams params_;
  Rng* rng_;
  std::vector<std::uint32_t> index_;
  std::vector<std::size_t> features_;
  std::vector<std::size_t> candidates_;
  std::vector<std::uint64_t> buffer_;
  std::vector<std::uint64_t> scratch_;
  std::vector<std::size_t> counts_;
  unsigned rank_bits_ = 0;
  std::vector<double> left_counts_;
  std::vector<double> right_counts_;
};

}  // namespace

DecisionTree grow_tree(const TrainingColumns& data, std::span<const int> row_weights, const GrowParams& params,
                       Rng* rng) {
  if (params.min_leaf < 1) throw InvalidArgument("grow_tree: min_leaf must be >= 1");
  if (params.mtry > 0 && static_cast<std::size_t>(params.mtry) < data.cols && rng == nullptr)
    throw InvalidArgument("grow_tree: feature sampling needs a random generator");
  return TreeGrower(data, row_weights, params, rng).grow();
}

namespace {

// Drops nodes unreachable from the root, keeping parents before children.
void compact(DecisionTree& tree) {
  std::vector<TreeNode> out;
  std::vector<int> queue{0};
  std::vector<int> remap(tree.nodes.size(), -1);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int old = queue[head];
    remap[static_cast<std::size_t>(old)] = static_cast<int>(out.size());
    out.push_back(tree.nodes[static_cast<std::size_t>(old)]);
    const TreeNode& n = tree.nodes[static_cast<std::size_t>(old)];
    if (!n.is_leaf()) {
      queue.push_back(n.left);
      queue.push_back(n.right);
    }
  }
  for (auto& n : out)
    if (!n.is_leaf()) {
      n.left = remap[static_cast<std::size_t>(n.left)];
      n.right = remap[static_cast<std::size_t>(n.right)];
    }
  tree.nodes = std::move(out);
}

}  // namespace

void prune_weakest_links(DecisionTree& tree, int levels) {
  if (levels < 0) throw InvalidArgument("prune_weakest_links: negative pruning level");
  if (tree.nodes.empty() || levels == 0) return;
  const double total = tree.nodes.front().weight;
  auto node_error = [&](const TreeNode& n) {
    return (n.weight - *std::max_element(n.counts.begin(), n.counts.end())) / total;
  };

  for (int level = 0; level < levels && !tree.nodes.front().is_leaf(); ++level) {
    const std::size_t n = tree.nodes.size();
    std::vector<double> subtree_error(n, 0.0);
    std::vector<double> leaves(n, 0.0);
    std::vector<char> reachable(n, 0);
    reachable[0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!reachable[i] || tree.nodes[i].is_leaf()) continue;
      reachable[static_cast<std::size_t>(tree.nodes[i].left)] = 1;
      reachable[static_cast<std::size_t>(tree.nodes[i].right)] = 1;
    }
    for (std::size_t i = n; i-- > 0;) {  // children have larger indices
      if (!reachable[i]) continue;
      const TreeNode& node = tree.nodes[i];
      if (node.is_leaf()) {
        subtree_error[i] = node_error(node);
        leaves[i] = 1.0;
      } else {
        const auto l = static_cast<std::size_t>(node.left);
        const auto r = static_cast<std::size_t>(node.right);
        subtree_error[i] = subtree_error[l] + subtree_error[r];
        leaves[i] = leaves[l] + leaves[r];
      }
    }
    std::size_t weakest = n;
    double weakest_g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!reachable[i] || tree.nodes[i].is_leaf()) continue;
      const double g = (node_error(tree.nodes[i]) - subtree_error[i]) / (leaves[i] - 1.0);
      if (g < weakest_g) {
        weakest_g = g;
        weakest = i;
      }
    }
    TreeNode& cut = tree.nodes[weakest];
    cut.feature = -1;
    cut.threshold = 0.0;
    cut.left = cut.right = -1;
  }
  compact(tree);
}

nlohmann::json to_json(const DecisionTree& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : tree.nodes)
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.weight, n.impurity, n.counts});
  return {{"n_classes", tree.n_classes}, {"n_features", tree.n_features}, {"nodes", std::move(nodes)}};
}

DecisionTree tree_from_json(const nlohmann::json& j) {
  DecisionTree tree;
  tree.n_classes = j.at("n_classes").get<int>();
  tree.n_features = j.at("n_features").get<int>();
  for (const auto& e : j.at("nodes")) {
    TreeNode n;
    n.feature = e.at(0).get<int>();
    n.threshold = e.at(1).get<double>();
    n.left = e.at(2).get<int>();
    n.right = e.at(3).get<int>();
    n.weight = e.at(4).get<double>();
    n.impurity = e.at(5).get<double>();
    n.counts = e.at(6).get<std::vector<double>>();
    tree.nodes.push_back(std::move(n));
  }
  if (tree.nodes.empty()) throw FormatError("tree: no nodes");
  for (const auto& n : tree.nodes)
    if (!n.is_leaf() && (n.left <= 0 || n.right <= 0 || static_cast<std::size_t>(n.left) >= tree.nodes.size() ||
                         static_cast<std::size_t>(n.right) >= tree.nodes.size()))
      throw FormatError("tree: child index out of range");
  return tree;
}

namespace {
std::vector<int> class_indices(std::span<const int> y, const std::vector<int>& classes) {
  std::vector<int> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out[i] = static_cast<int>(std::lower_bound(classes.begin(), classes.end(), y[i]) - classes.begin());
  return out;
}
}  // namespace

CartModel cart_train(const Matrix& X, std::span<const int> y, int pruning_level, int min_leaf) {
  if (X.rows() == 0) throw InvalidArgument("cart_train: no training rows");
  if (y.size() != X.rows()) throw InvalidArgument("cart_train: label count mismatch");
  CartModel model;
  model.classes = distinct_classes(y);
  model.pruning_level = pruning_level;
  model.min_leaf = min_leaf;
  const auto idx = class_indices(y, model.classes);
  TrainingColumns data(X, idx, static_cast<int>(model.classes.size()));
  std::vector<int> weights(X.rows(), 1);
  model.tree = grow_tree(data, weights, GrowParams{min_leaf, 0});
  prune_weakest_links(model.tree, pruning_level);
  return model;
}

ProbabilityVector cart_predict(const CartModel& model, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(model.tree.n_features))
    throw InvalidArgument("cart_predict: expected " + std::to_string(model.tree.n_features) + " features");
  const TreeNode& leaf = model.tree.leaf_for(x);
  ProbabilityVector p;
  p.classes = model.classes;
  p.probs.resize(leaf.counts.size());
  for (std::size_t c = 0; c < leaf.counts.size(); ++c) p.probs[c] = leaf.counts[c] / leaf.weight;
  return p;
}

}  // namespace tmr
