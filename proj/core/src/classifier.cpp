#include "tmr/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "tmr/error.hpp"

namespace tmr {

double ProbabilityVector::of(int label) const {
  auto it = std::lower_bound(classes.begin(), classes.end(), label);
  if (it == classes.end() || *it != label) return 0.0;
  return probs[static_cast<std::size_t>(it - classes.begin())];
}

int ProbabilityVector::argmax() const {
  if (probs.empty()) throw InvalidArgument("ProbabilityVector::argmax: empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = i;
  return classes[best];
}

bool ProbabilityVector::valid(double tol) const {
  if (probs.size() != classes.size() || probs.empty()) return false;
  double s = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) return false;
    s += p;
  }
  return std::abs(s - 1.0) <= tol;
}

std::vector<int> distinct_classes(std::span<const int> labels) {
  std::vector<int> out(labels.begin(), labels.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Knn: return "knn";
    case Algorithm::Cart: return "cart";
    case Algorithm::Rf: return "rf";
    case Algorithm::Svm: return "svm";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view s) {
  for (Algorithm a : {Algorithm::Knn, Algorithm::Cart, Algorithm::Rf, Algorithm::Svm})
    if (algorithm_name(a) == s) return a;
  throw FormatError("unknown algorithm '" + std::string(s) + "' (expected knn, cart, rf or svm)");
}

const std::vector<int>& Classifier::classes() const {
  return std::visit([](const auto& m) -> const std::vector<int>& { return m.classes; }, model);
}

Classifier train_classifier(Algorithm algorithm, const Matrix& X, std::span<const int> y,
                            const ClassifierParams& params, std::uint64_t seed) {
  Classifier c;
  c.algorithm = algorithm;
  switch (algorithm) {
    case Algorithm::Knn: c.model = knn_train(X, y, params.knn_k); break;
    case Algorithm::Cart: c.model = cart_train(X, y, params.cart_pruning, params.cart_min_leaf); break;
    case Algorithm::Rf: c.model = rf_train(X, y, params.rf, seed); break;
    case Algorithm::Svm: c.model = svm_train(X, y, params.svm); break;
  }
  return c;
}

ProbabilityVector predict(const Classifier& c, std::span<const double> x) {
  struct Visitor {
    std::span<const double> x;
    ProbabilityVector operator()(const KnnModel& m) const { return knn_predict(m, x); }
    ProbabilityVector operator()(const CartModel& m) const { return cart_predict(m, x); }
    ProbabilityVector operator()(const RfModel& m) const { return rf_predict(m, x); }
    ProbabilityVector operator()(const SvmModel& m) const { return svm_predict(m, x); }
  };
  return std::visit(Visitor{x}, c.model);
}

nlohmann::json to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != rows * cols) throw FormatError("matrix: data length does not match rows x cols");
  Matrix m(rows, cols);
  std::copy(data.begin(), data.end(), m.data().begin());
  return m;
}

namespace {

constexpr int kModelFormatVersion = 1;

nlohmann::json svm_to_json(const SvmModel& m) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : m.pairs)
    pairs.push_back({{"positive", p.positive},
                     {"negative", p.negative},
                     {"support_vectors", to_json(p.support_vectors)},
                     {"coef", p.coef},
                     {"bias", p.bias},
                     {"platt_a", p.platt.a},
                     {"platt_b", p.platt.b},
                     {"iterations", p.iterations},
                     {"kkt_residual", p.kkt_residual}});
  return {{"classes", m.classes}, {"n_features", m.n_features}, {"c", m.c},
          {"gamma", m.gamma},     {"tol", m.tol},               {"pairs", std::move(pairs)}};
}

SvmModel svm_from_json(const nlohmann::json& j) {
  SvmModel m;
  m.classes = j.at("classes").get<std::vector<int>>();
  m.n_features = j.at("n_features").get<int>();
  m.c = j.at("c").get<double>();
  m.gamma = j.at("gamma").get<double>();
  m.tol = j.at("tol").get<double>();
  for (const auto& e : j.at("pairs")) {
    BinarySvm p;
    p.positive = e.at("positive").get<int>();
    p.negative = e.at("negative").get<int>();
    p.support_vectors = matrix_from_json(e.at("support_vectors"));
    p.coef = e.at("coef").get<std::vector<double>>();
    p.bias = e.at("bias").get<double>();
    p.platt.a = e.at("platt_a").get<double>();
    p.platt.b = e.at("platt_b").get<double>();
    p.iterations = e.at("iterations").get<long>();
    p.kkt_residual = e.at("kkt_residual").get<double>();
    if (p.coef.size() != p.support_vectors.rows()) throw FormatError("svm: coefficient count mismatch");
    m.pairs.push_back(std::move(p));
  }
  return m;
}

}  // namespace

nlohmann::json to_json(const Classifier& c) {
  nlohmann::json j{{"format", "tmr-classifier"}, {"version", kModelFormatVersion},
                   {"algorithm", std::string(algorithm_name(c.algorithm))}};
  struct Visitor {
    nlohmann::json& j;
    void operator()(const KnnModel& m) const {
      j["k"] = m.k;
      j["classes"] = m.classes;
      j["labels"] = m.labels;
      j["X"] = to_json(m.X);
    }
    void operator()(const CartModel& m) const {
      j["classes"] = m.classes;
      j["pruning_level"] = m.pruning_level;
      j["min_leaf"] = m.min_leaf;
      j["tree"] = to_json(m.tree);
    }
    void operator()(const RfModel& m) const {
      j["classes"] = m.classes;
      j["n_features"] = m.n_features;
      j["mtry"] = m.mtry;
      j["bootstrap"] = m.bootstrap;
      j["tree_seeds"] = m.tree_seeds;
      nlohmann::json trees = nlohmann::json::array();
      for (const auto& t : m.trees) trees.push_back(to_json(t));
      j["trees"] = std::move(trees);
    }
    void operator()(const SvmModel& m) const { j["svm"] = svm_to_json(m); }
  };
  std::visit(Visitor{j}, c.model);
  return j;
}

Classifier classifier_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "tmr-classifier") throw FormatError("not a classifier document");
    if (j.at("version").get<int>() != kModelFormatVersion) throw FormatError("unsupported classifier version");
    Classifier c;
    c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    switch (c.algorithm) {
      case Algorithm::Knn: {
        KnnModel m;
        m.k = j.at("k").get<int>();
        m.classes = j.at("classes").get<std::vector<int>>();
        m.labels = j.at("labels").get<std::vector<int>>();
        m.X = matrix_from_json(j.at("X"));
        if (m.labels.size() != m.X.rows()) throw FormatError("knn: label count mismatch");
        c.model = std::move(m);
        break;
      }
      case Algorithm::Cart: {
        CartModel m;
        m.classes = j.at("classes").get<std::vector<int>>();
        m.pruning_level = j.at("pruning_level").get<int>();
        m.min_leaf = j.at("min_leaf").get<int>();
        m.tree = tree_from_json(j.at("tree"));
        c.model = std::move(m);
        break;
      }
      case Algorithm::Rf: {
        RfModel m;
        m.classes = j.at("classes").get<std::vector<int>>();
        m.n_features = j.at("n_features").get<int>();
        m.mtry = j.at("mtry").get<int>();
        m.bootstrap = j.at("bootstrap").get<bool>();
        m.tree_seeds = j.at("tree_seeds").get<std::vector<std::uint64_t>>();
        for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
        c.model = std::move(m);
        break;
      }
      case Algorithm::Svm: c.model = svm_from_json(j.at("svm")); break;
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("classifier: ") + e.what());
  }
}

}  // namespace tmr
