#include "tmr/knn.hpp"

#include <algorithm>

#include "tmr/error.hpp"

namespace tmr {

KnnModel knn_train(const Matrix& X, std::span<const int> y, int k) {
  if (y.size() != X.rows()) throw InvalidArgument("knn_train: label count mismatch");
  if (k < 1 || static_cast<std::size_t>(k) > X.rows())
    throw InvalidArgument("knn_train: K must lie in [1, training size]");
  return KnnModel{X, std::vector<int>(y.begin(), y.end()), distinct_classes(y), k};
}

std::vector<std::size_t> knn_neighbors(const KnnModel& model, std::span<const double> x) {
  if (x.size() != model.X.cols())
    throw InvalidArgument("knn_predict: expected " + std::to_string(model.X.cols()) + " features, got " +
                          std::to_string(x.size()));
  const std::size_t n = model.X.rows();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = model.X.row(i);
    double d = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double diff = row[j] - x[j];
      d += diff * diff;
    }
    dist[i] = {d, i};
  }
  const auto k = static_cast<std::size_t>(model.k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

ProbabilityVector knn_predict(const KnnModel& model, std::span<const double> x) {
  ProbabilityVector p;
  p.classes = model.classes;
  p.probs.assign(model.classes.size(), 0.0);
  for (std::size_t i : knn_neighbors(model, x)) {
    const auto c = std::lower_bound(model.classes.begin(), model.classes.end(), model.labels[i]) -
                   model.classes.begin();
    p.probs[static_cast<std::size_t>(c)] += 1.0;
  }
  for (double& v : p.probs) v /= static_cast<double>(model.k);
  return p;
}

}  // namespace tmr
