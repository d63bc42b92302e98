#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tmr/error.hpp"
#include "tmr/matrix.hpp"
#include "tmr/probability.hpp"

namespace tmr {

struct SvmParams {
  double c = 10.0;
  double gamma = 0.0;  // 0 selects 1 / feature count
  double tol = 1e-3;   // stopping bound on the maximal KKT violation
  long max_passes = 10000;  // iteration cap = max_passes * training size
  std::size_t cache_mb = 256;
};

/// exp(-gamma * |u - v|^2)
double rbf_kernel(std::span<const double> u, std::span<const double> v, double gamma);

/// Thrown when SMO hits its iteration cap.
class SvmConvergenceError : public ComputeError {
public:
  SvmConvergenceError(const std::string& what, double residual) : ComputeError(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

struct SmoResult {
  std::vector<double> alpha;
  double bias = 0.0;  // decision value f(x) = sum_i alpha_i y_i K(x_i, x) + bias
  long iterations = 0;
  double kkt_residual = 0.0;  // max violating-pair gap at exit
  std::vector<double> objective_trace;  // dual objective every 100 iterations (if requested)
  std::vector<double> decision_values;  // f at every training row
};

/// Soft-margin dual, RBF kernel, solved by sequential minimal optimisation
/// with second-order working-set selection. Labels must be +1 or -1.
SmoResult smo_solve(const Matrix& X, std::span<const int> signs, const SvmParams& params, double gamma,
                    bool track_objective = false);

/// Sigmoid P(positive | f) = 1 / (1 + exp(a f + b)).
struct PlattSigmoid {
  double a = 0.0;
  double b = 0.0;

  double probability(double f) const;
  friend bool operator==(const PlattSigmoid&, const PlattSigmoid&) = default;
};

/// Regularised maximum-likelihood fit (Newton with backtracking, targets
/// (N+ + 1)/(N+ + 2) and 1/(N- + 2)).
PlattSigmoid fit_platt(std::span<const double> decision_values, std::span<const int> signs);

/// One class pair: positive = the lower class label.
struct BinarySvm {
  int positive = 0;
  int negative = 1;
  Matrix support_vectors;
  std::vector<double> coef;  // alpha_i * y_i per support vector
  double bias = 0.0;
  PlattSigmoid platt;
  long iterations = 0;
  double kkt_residual = 0.0;

  friend bool operator==(const BinarySvm&, const BinarySvm&) = default;
};

struct SvmModel {
  std::vector<int> classes;
  int n_features = 0;
  double c = 10.0;
  double gamma = 0.0;
  double tol = 1e-3;
  std::vector<BinarySvm> pairs;  // one per class pair (a < b), lexicographic

  friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

double decision_value(const BinarySvm& machine, std::span<const double> x, double gamma);

/// One-vs-one training of every class pair.
SvmModel svm_train(const Matrix& X, std::span<const int> y, const SvmParams& params = {});

/// Platt probabilities per pair, averaged into per-class scores (each class
/// sums its pairwise probabilities) and normalised.
ProbabilityVector svm_predict(const SvmModel& model, std::span<const double> x);

}  // namespace tmr
