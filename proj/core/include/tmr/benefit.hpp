#pragma once

#include <array>
#include <span>
#include <vector>

#include "json.hpp"
#include "tmr/dataset.hpp"
#include "tmr/hierarchy.hpp"
#include "tmr/modes.hpp"

namespace tmr {

/// Beta(a, b) prior updated with Bernoulli outcomes.
struct BetaPosterior {
  double a = 1.0;
  double b = 1.0;
  long successes = 0;
  long trials = 0;

  double alpha() const { return static_cast<double>(successes) + a; }
  double beta() const { return static_cast<double>(trials - successes) + b; }
  double mean() const { return alpha() / (a + b + static_cast<double>(trials)); }
};

/// Outcomes must be 0 or 1; a and b must be positive.
BetaPosterior estimate_beta_posterior(std::span<const int> outcomes, double a = 1.0, double b = 1.0);

/// Held-out correctness records for both layers.
struct ValidationOutcomes {
  std::vector<int> top1;  // first-layer argmax equals the truth
  std::vector<int> top2;  // truth is one of the first-layer top two
  std::array<std::vector<int>, kModePairCount> pair_correct;  // pair model right on rows of its pair
};

/// Runs every layer of `model` on `rows` of `ds` (all rows when empty).
ValidationOutcomes collect_outcomes(const HierarchicalModel& model, const Dataset& ds,
                                    std::span<const std::size_t> rows = {});

struct BenefitEstimate {
  double p1 = 0.0;
  double delta = 0.0;
  std::array<double, kModePairCount> pk{};
  std::array<double, kModePairCount> ek{};  // 1 - pk
  double c = 0.1;
  double threshold = 0.0;
  bool beneficial = false;
};

/// threshold = p1 (1 - c S) / (c S) with S = sum of pk; beneficial when
/// delta exceeds it. Throws ComputeError when c S is zero.
BenefitEstimate benefit_from_estimates(double p1, double delta, const std::array<double, kModePairCount>& pk, double c);

/// Posterior means of top-1, top-2 and per-pair correctness; delta is
/// floored at 0.
BenefitEstimate estimate_benefit(const ValidationOutcomes& outcomes, double a = 1.0, double b = 1.0, double c = 0.1);

/// Expected two-layer accuracy (p1 + delta) c S, and the same quantity
/// written through the pair error rates: (p1 + delta) - (p1 + delta) c sum(ek).
/// The two agree when c = 1/10.
double two_layer_accuracy(double p1, double delta, std::span<const double> pk, double c);
double two_layer_accuracy_from_errors(double p1, double delta, std::span<const double> ek, double c);

/// {P1, Delta, Pk[10], threshold, beneficial} plus c and the pair errors.
nlohmann::json to_json(const BenefitEstimate& e);

}  // namespace tmr
