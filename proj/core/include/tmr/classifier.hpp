#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "json.hpp"
#include "tmr/forest.hpp"
#include "tmr/knn.hpp"
#include "tmr/svm.hpp"
#include "tmr/tree.hpp"

namespace tmr {

enum class Algorithm { Knn, Cart, Rf, Svm };

std::string_view algorithm_name(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

struct ClassifierParams {
  int knn_k = 7;
  int cart_pruning = 6;
  int cart_min_leaf = 1;
  ForestParams rf;
  SvmParams svm;
};

/// A trained model of any of the four algorithms.
struct Classifier {
  Algorithm algorithm = Algorithm::Rf;
  std::variant<KnnModel, CartModel, RfModel, SvmModel> model;

  const std::vector<int>& classes() const;
  friend bool operator==(const Classifier&, const Classifier&) = default;
};

Classifier train_classifier(Algorithm algorithm, const Matrix& X, std::span<const int> y,
                            const ClassifierParams& params, std::uint64_t seed);
ProbabilityVector predict(const Classifier& c, std::span<const double> x);

nlohmann::json to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Classifier& c);
Classifier classifier_from_json(const nlohmann::json& j);

}  // namespace tmr
