#pragma once

#include <span>
#include <vector>

#include "tmr/matrix.hpp"
#include "tmr/probability.hpp"

namespace tmr {

struct KnnModel {
  Matrix X;
  std::vector<int> labels;
  std::vector<int> classes;
  int k = 7;

  friend bool operator==(const KnnModel&, const KnnModel&) = default;
};

/// Stores the training set; requires 1 <= k <= rows.
KnnModel knn_train(const Matrix& X, std::span<const int> y, int k);

/// Indices of the k nearest training rows by Euclidean distance, nearest
/// first; equal distances go to the lower row index.
std::vector<std::size_t> knn_neighbors(const KnnModel& model, std::span<const double> x);

/// Vote fraction of each class among the k nearest rows.
ProbabilityVector knn_predict(const KnnModel& model, std::span<const double> x);

}  // namespace tmr
