#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "tmr/classifier.hpp"
#include "tmr/error.hpp"

using namespace tmr;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  for (const auto& r : rows) m.append_row(r);
  return m;
}

// Four clusters around (+-1, +-1); label 1 when the signs differ.
void xor_data(std::size_t per_cluster, std::uint64_t seed, Matrix& X, std::vector<int>& y, double spread = 0.15) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, spread);
  X = Matrix();
  y.clear();
  for (int cx : {-1, 1})
    for (int cy : {-1, 1})
      for (std::size_t k = 0; k < per_cluster; ++k) {
        X.append_row(std::vector<double>{cx + g(rng), cy + g(rng)});
        y.push_back(cx * cy < 0 ? 1 : 0);
      }
}

// Overlapping Gaussian blobs in `dim` dimensions.
void blobs(std::size_t n, std::size_t dim, int classes, double sep, std::uint64_t seed, Matrix& X, std::vector<int>& y) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  X = Matrix();
  y.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(classes));
    std::vector<double> row(dim);
    for (std::size_t d = 0; d < dim; ++d) row[d] = g(rng) + (d == static_cast<std::size_t>(c) % dim ? sep : 0.0);
    X.append_row(row);
    y.push_back(c);
  }
}

double training_accuracy(const Classifier& c, const Matrix& X, const std::vector<int>& y) {
  int ok = 0;
  for (std::size_t r = 0; r < X.rows(); ++r) ok += predict(c, X.row(r)).argmax() == y[r];
  return static_cast<double>(ok) / static_cast<double>(X.rows());
}

}  // namespace

TEST(ProbabilityVector, ArgmaxTiesAndValidity) {
  ProbabilityVector p{{0, 2, 4}, {0.4, 0.4, 0.2}};
  EXPECT_EQ(p.argmax(), 0);
  EXPECT_TRUE(p.valid());
  EXPECT_EQ(p.of(3), 0.0);
  EXPECT_DOUBLE_EQ(p.of(4), 0.2);
  ProbabilityVector bad{{0, 1}, {0.7, 0.4}};
  EXPECT_FALSE(bad.valid());
}

TEST(Knn, ExactMatchWithKOne) {
  const Matrix X = to_matrix({{0, 0}, {1, 1}, {2, 2}});
  const std::vector<int> y{0, 1, 2};
  const KnnModel m = knn_train(X, y, 1);
  const auto p = knn_predict(m, std::vector<double>{1, 1});
  EXPECT_EQ(p.argmax(), 1);
  EXPECT_DOUBLE_EQ(p.of(1), 1.0);
}

TEST(Knn, VoteFraction) {
  const Matrix X = to_matrix({{0.0}, {0.1}, {0.2}, {0.3}, {0.4}, {5.0}});
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const auto p = knn_predict(knn_train(X, y, 5), std::vector<double>{0.0});
  EXPECT_DOUBLE_EQ(p.of(0), 0.6);
  EXPECT_DOUBLE_EQ(p.of(1), 0.4);
}

TEST(Knn, TiesGoToLowerRowIndex) {
  // Rows 1 and 2 are equidistant from the query; K = 2 keeps rows 0 and 1.
  const Matrix X = to_matrix({{0.0}, {1.0}, {-1.0}});
  const std::vector<int> y{0, 1, 2};
  const KnnModel m = knn_train(X, y, 2);
  EXPECT_EQ(knn_neighbors(m, std::vector<double>{0.0}), (std::vector<std::size_t>{0, 1}));
}

TEST(Knn, MatchesExhaustiveScan) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coord(0, 4);  // coarse grid forces distance ties
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < 200; ++i) {
    rows.push_back({static_cast<double>(coord(rng)), static_cast<double>(coord(rng)), static_cast<double>(coord(rng))});
    y.push_back(i % 3);
  }
  for (int k : {1, 4, 7}) {
    const KnnModel m = knn_train(to_matrix(rows), y, k);
    for (int q = 0; q < 50; ++q) {
      const std::vector<double> query{coord(rng) + 0.5, static_cast<double>(coord(rng)), static_cast<double>(coord(rng))};
      const auto p = knn_predict(m, query);
      const auto ref = oracle::knn_vote(rows, y, query, k, 3);
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(p.of(c), ref[static_cast<std::size_t>(c)], 1e-12);
    }
  }
}

TEST(Knn, InvariantUnderCommonPositiveScaling) {
  Matrix X;
  std::vector<int> y;
  blobs(120, 4, 3, 1.0, 5, X, y);
  Matrix Xs = X;
  for (double& v : Xs.data()) v *= 3.7;
  const KnnModel a = knn_train(X, y, 7), b = knn_train(Xs, y, 7);
  std::mt19937_64 rng(1);
  for (int q = 0; q < 30; ++q) {
    auto query = oracle::random_series(rng, 4);
    auto scaled = query;
    for (double& v : scaled) v *= 3.7;
    EXPECT_EQ(knn_neighbors(a, query), knn_neighbors(b, scaled));
  }
}

TEST(Knn, Preconditions) {
  const Matrix X = to_matrix({{0.0}, {1.0}});
  EXPECT_THROW(knn_train(X, std::vector<int>{0, 1}, 3), InvalidArgument);
  EXPECT_THROW(knn_train(X, std::vector<int>{0, 1}, 0), InvalidArgument);
  EXPECT_THROW(knn_predict(knn_train(X, std::vector<int>{0, 1}, 1), std::vector<double>{1.0, 2.0}), InvalidArgument);
}

TEST(Cart, SingleClassIsOneLeaf) {
  const Matrix X = to_matrix({{1.0}, {2.0}, {3.0}});
  const CartModel m = cart_train(X, std::vector<int>{3, 3, 3});
  EXPECT_EQ(m.tree.nodes.size(), 1u);
  EXPECT_DOUBLE_EQ(cart_predict(m, std::vector<double>{9.0}).of(3), 1.0);
}

TEST(Cart, XorReachesFullTrainingAccuracy) {
  Matrix X;
  std::vector<int> y;
  xor_data(25, 3, X, y);
  Classifier c;
  c.algorithm = Algorithm::Cart;
  c.model = cart_train(X, y, 0, 1);
  EXPECT_EQ(training_accuracy(c, X, y), 1.0);
  EXPECT_GE(std::get<CartModel>(c.model).tree.depth(), 2u);
}

TEST(Cart, PerfectSplitWinsAtTheMidpoint) {
  // Feature 1 separates the classes; feature 0 is noise.
  const Matrix X = to_matrix({{0.3, 1.0}, {0.1, 2.0}, {0.2, 5.0}, {0.4, 7.0}});
  const CartModel m = cart_train(X, std::vector<int>{0, 0, 1, 1});
  const TreeNode& root = m.tree.nodes[0];
  EXPECT_EQ(root.feature, 1);
  EXPECT_DOUBLE_EQ(root.threshold, 3.5);
  EXPECT_EQ(m.tree.nodes[static_cast<std::size_t>(root.left)].impurity, 0.0);
  EXPECT_EQ(m.tree.nodes[static_cast<std::size_t>(root.right)].impurity, 0.0);
}

TEST(Cart, FullTrainingAccuracyWithoutConflictingRows) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Matrix X;
    std::vector<int> y;
    blobs(150, 3, 4, 0.5, seed, X, y);
    Classifier c;
    c.algorithm = Algorithm::Cart;
    c.model = cart_train(X, y, 0, 1);
    EXPECT_EQ(training_accuracy(c, X, y), 1.0);
  }
}

TEST(Cart, PruningRemovesWeakestLinks) {
  Matrix X;
  std::vector<int> y;
  blobs(200, 3, 3, 1.0, 9, X, y);
  const CartModel full = cart_train(X, y, 0, 1);
  std::size_t prev = full.tree.leaf_count();
  for (int level = 1; level <= 10; ++level) {
    const CartModel pruned = cart_train(X, y, level, 1);
    EXPECT_EQ(pruned.tree.internal_count() + pruned.tree.leaf_count(), pruned.tree.nodes.size());
    EXPECT_LT(pruned.tree.leaf_count(), prev);
    prev = pruned.tree.leaf_count();
    for (const auto& n : pruned.tree.nodes)
      if (!n.is_leaf()) {
        EXPECT_GE(n.left, 0);
        EXPECT_GE(n.right, 0);
      }
  }
  const CartModel root = cart_train(X, y, 100000, 1);
  EXPECT_EQ(root.tree.nodes.size(), 1u);
  EXPECT_TRUE(cart_predict(root, X.row(0)).valid());
}

TEST(Cart, MinLeafIsRespected) {
  Matrix X;
  std::vector<int> y;
  blobs(120, 2, 2, 0.3, 4, X, y);
  const CartModel m = cart_train(X, y, 0, 7);
  for (const auto& n : m.tree.nodes)
    if (n.is_leaf()) EXPECT_GE(n.weight, 7.0);
}

TEST(Forest, SingleTreeWithoutBootstrapEqualsCart) {
  Matrix X;
  std::vector<int> y;
  blobs(150, 4, 3, 1.0, 2, X, y);
  const RfModel rf = rf_train(X, y, ForestParams{1, 4, false}, 99);
  const CartModel cart = cart_train(X, y, 0, 1);
  EXPECT_EQ(rf.trees[0], cart.tree);
  std::mt19937_64 rng(3);
  for (int q = 0; q < 50; ++q) {
    const auto query = oracle::random_series(rng, 4, 2.0);
    EXPECT_EQ(rf_predict(rf, query).argmax(), cart_predict(cart, query).argmax());
  }
}

TEST(Forest, UnanimousVoteAndDeterminism) {
  const Matrix X = to_matrix({{0.0}, {0.1}, {0.2}, {5.0}, {5.1}, {5.2}});
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const RfModel a = rf_train(X, y, ForestParams{25, 0, true}, 7);
  const RfModel b = rf_train(X, y, ForestParams{25, 0, true}, 7);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.tree_seeds.size(), 25u);
  // Every bootstrap of six rows holds both classes with high probability;
  // a far query then lands on the same side in every tree.
  const auto p = rf_predict(a, std::vector<double>{100.0});
  EXPECT_TRUE(p.valid());
  if (p.of(1) > 0.99) EXPECT_DOUBLE_EQ(p.of(1), 1.0);
}

TEST(Forest, MoreTreesDoNotIncreasePredictionVariance) {
  Matrix X;
  std::vector<int> y;
  blobs(100, 3, 2, 0.8, 12, X, y);
  const std::vector<double> query{0.4, 0.4, 0.0};
  auto spread = [&](int n_trees) {
    std::vector<double> p;
    for (std::uint64_t s = 0; s < 20; ++s) p.push_back(rf_predict(rf_train(X, y, ForestParams{n_trees, 0, true}, s), query).of(0));
    const double m = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
    double v = 0.0;
    for (double x : p) v += (x - m) * (x - m);
    return v / static_cast<double>(p.size());
  };
  EXPECT_LE(spread(400), 1.10 * spread(50));
}

TEST(Forest, GiniImportanceConservation) {
  Matrix X;
  std::vector<int> y;
  blobs(200, 5, 3, 1.0, 8, X, y);
  const RfModel rf = rf_train(X, y, ForestParams{30, 0, true}, 1);
  const auto imp = gini_importance(rf);
  double total = std::accumulate(imp.begin(), imp.end(), 0.0);
  // Per tree the split decreases telescope to root impurity minus the
  // weighted leaf impurities.
  double expected = 0.0;
  for (const auto& t : rf.trees) {
    const double w = t.nodes[0].weight;
    double leaves = 0.0;
    for (const auto& n : t.nodes)
      if (n.is_leaf()) leaves += n.weight * n.impurity;
    expected += (w * t.nodes[0].impurity - leaves) / w;
  }
  expected /= static_cast<double>(rf.trees.size());
  EXPECT_NEAR(total, expected, 1e-9 * expected);
}

TEST(Svm, TwoPointsAreSeparatedWithMargin) {
  const Matrix X = to_matrix({{-1.0, 0.0}, {1.0, 0.0}});
  const SmoResult r = smo_solve(X, std::vector<int>{1, -1}, SvmParams{}, 0.5);
  EXPECT_GT(r.decision_values[0], 0.0);
  EXPECT_LT(r.decision_values[1], 0.0);
}

TEST(Svm, XorWithRbfKernel) {
  Matrix X;
  std::vector<int> y;
  xor_data(20, 5, X, y);
  ClassifierParams p;
  p.svm.c = 10.0;
  p.svm.gamma = 1.0;
  const Classifier c = train_classifier(Algorithm::Svm, X, y, p, 0);
  EXPECT_EQ(training_accuracy(c, X, y), 1.0);
}

TEST(Svm, DualFeasibilityAndMonotoneObjective) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Matrix X;
    std::vector<int> y;
    blobs(80, 3, 2, 1.2, seed, X, y);
    std::vector<int> signs;
    for (int v : y) signs.push_back(v == 0 ? 1 : -1);
    SvmParams params;
    params.c = 1.0 + static_cast<double>(seed % 5);
    const SmoResult r = smo_solve(X, signs, params, 0.5, true);
    double balance = 0.0;
    for (std::size_t i = 0; i < r.alpha.size(); ++i) {
      EXPECT_GE(r.alpha[i], 0.0);
      EXPECT_LE(r.alpha[i], params.c);
      balance += r.alpha[i] * signs[i];
    }
    EXPECT_NEAR(balance, 0.0, 1e-6);
    EXPECT_LE(r.kkt_residual, params.tol);
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
      EXPECT_GE(r.objective_trace[k], r.objective_trace[k - 1] - 1e-12 * std::abs(r.objective_trace[k - 1]));
  }
}

TEST(Svm, SymmetricQueryIsEvenOdds) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 0.6);
  Matrix X;
  std::vector<int> y;
  for (int i = 0; i < 40; ++i) {
    const std::vector<double> p{1.0 + g(rng), g(rng)};
    X.append_row(p);
    y.push_back(0);
    X.append_row(std::vector<double>{-p[0], -p[1]});
    y.push_back(1);
  }
  ClassifierParams params;
  params.svm.gamma = 0.5;
  const Classifier c = train_classifier(Algorithm::Svm, X, y, params, 0);
  EXPECT_NEAR(predict(c, std::vector<double>{0.0, 0.0}).of(0), 0.5, 0.05);
}

TEST(Svm, IterationCapRaisesWithResidual) {
  Matrix X;
  std::vector<int> y;
  blobs(200, 3, 2, 0.2, 1, X, y);
  std::vector<int> signs;
  for (int v : y) signs.push_back(v == 0 ? 1 : -1);
  SvmParams params;
  params.max_passes = 0;
  try {
    smo_solve(X, signs, params, 0.5);
    FAIL() << "expected SvmConvergenceError";
  } catch (const SvmConvergenceError& e) {
    EXPECT_GT(e.residual(), params.tol);
  }
}

TEST(Svm, Preconditions) {
  const Matrix X = to_matrix({{0.0}, {1.0}});
  EXPECT_THROW(svm_train(X, std::vector<int>{1, 1}), InvalidArgument);
  SvmParams bad;
  bad.c = 0.0;
  EXPECT_THROW(svm_train(X, std::vector<int>{0, 1}, bad), InvalidArgument);
}

TEST(Platt, FitsAMonotoneSigmoid) {
  std::vector<double> f;
  std::vector<int> s;
  for (int i = -20; i <= 20; ++i) {
    f.push_back(i / 5.0);
    s.push_back(i + (i % 3 == 0 ? 3 : 0) > 0 ? 1 : -1);
  }
  const PlattSigmoid p = fit_platt(f, s);
  EXPECT_LT(p.a, 0.0);
  EXPECT_GT(p.probability(3.0), 0.9);
  EXPECT_LT(p.probability(-3.0), 0.1);
}

TEST(Classifier, EveryAlgorithmGivesValidProbabilitiesAndRoundTrips) {
  Matrix X;
  std::vector<int> y;
  blobs(150, 4, 5, 1.5, 3, X, y);
  ClassifierParams params;
  params.rf.n_trees = 15;
  for (Algorithm a : {Algorithm::Knn, Algorithm::Cart, Algorithm::Rf, Algorithm::Svm}) {
    const Classifier c = train_classifier(a, X, y, params, 5);
    const Classifier back = classifier_from_json(nlohmann::json::parse(to_json(c).dump()));
    EXPECT_EQ(back, c) << algorithm_name(a);
    std::mt19937_64 rng(2);
    for (int q = 0; q < 20; ++q) {
      const auto query = oracle::random_series(rng, 4, 2.0);
      const auto p = predict(c, query);
      EXPECT_TRUE(p.valid()) << algorithm_name(a);
      EXPECT_EQ(p.probs, predict(back, query).probs);
    }
  }
}

TEST(Classifier, RejectsMalformedJson) {
  EXPECT_THROW(classifier_from_json(nlohmann::json{{"format", "tmr-classifier"}}), FormatError);
  EXPECT_THROW(parse_algorithm("boost"), FormatError);
}
