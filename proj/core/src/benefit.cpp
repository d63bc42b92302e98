#include "tmr/benefit.hpp"

#include <algorithm>

#include "tmr/error.hpp"

namespace tmr {

BetaPosterior estimate_beta_posterior(std::span<const int> outcomes, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("beta prior parameters must be positive");
  BetaPosterior post{a, b, 0, static_cast<long>(outcomes.size())};
  for (int y : outcomes) {
    if (y != 0 && y != 1) throw InvalidArgument("beta posterior: outcome " + std::to_string(y) + " is not 0 or 1");
    post.successes += y;
  }
  return post;
}

ValidationOutcomes collect_outcomes(const HierarchicalModel& model, const Dataset& ds, std::span<const std::size_t> rows) {
  if (model.framework != Framework::Hierarchical) throw InvalidArgument("benefit needs a hierarchical model");
  if (ds.feature_ids != model.input_ids) throw InvalidArgument("validation matrix columns differ from the model inputs");
  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(ds.rows());
    for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
    rows = all;
  }
  ValidationOutcomes out;
  for (std::size_t r : rows) {
    const auto x = ds.X.row(r);
    const int truth = ds.labels[r];
    const ProbabilityVector p = model.first.predict(x);
    std::vector<double> probs(kModeCount);
    for (int m = 0; m < kModeCount; ++m) probs[static_cast<std::size_t>(m)] = p.of(m);
    const auto [i, j] = top_two(probs);
    out.top1.push_back(i == truth ? 1 : 0);
    out.top2.push_back(i == truth || j == truth ? 1 : 0);
    for (const auto& pair : all_mode_pairs()) {
      const auto k = static_cast<std::size_t>(pair_index(pair));
      if (truth != mode_index(pair.first) && truth != mode_index(pair.second)) continue;
      out.pair_correct[k].push_back(model.pairs[k].predict(x).argmax() == truth ? 1 : 0);
    }
  }
  return out;
}

BenefitEstimate benefit_from_estimates(double p1, double delta, const std::array<double, kModePairCount>& pk, double c) {
  BenefitEstimate e;
  e.p1 = p1;
  e.delta = delta;
  e.pk = pk;
  e.c = c;
  double sum = 0.0;
  for (std::size_t k = 0; k < pk.size(); ++k) {
    e.ek[k] = 1.0 - pk[k];
    sum += pk[k];
  }
  const double cs = c * sum;
  if (cs == 0.0) throw ComputeError("benefit: c * sum(Pk) is zero (degenerate second layer)");
  e.threshold = p1 * (1.0 - cs) / cs;
  e.beneficial = delta > e.threshold;
  return e;
}

BenefitEstimate estimate_benefit(const ValidationOutcomes& outcomes, double a, double b, double c) {
  const double p1 = estimate_beta_posterior(outcomes.top1, a, b).mean();
  const double p2 = estimate_beta_posterior(outcomes.top2, a, b).mean();
  std::array<double, kModePairCount> pk{};
  for (std::size_t k = 0; k < pk.size(); ++k) pk[k] = estimate_beta_posterior(outcomes.pair_correct[k], a, b).mean();
  return benefit_from_estimates(p1, std::max(0.0, p2 - p1), pk, c);
}

double two_layer_accuracy(double p1, double delta, std::span<const double> pk, double c) {
  double sum = 0.0;
  for (double v : pk) sum += v;
  return (p1 + delta) * c * sum;
}

double two_layer_accuracy_from_errors(double p1, double delta, std::span<const double> ek, double c) {
  double sum = 0.0;
  for (double v : ek) sum += v;
  return p1 + delta - (p1 + delta) * c * sum;
}

nlohmann::json to_json(const BenefitEstimate& e) {
  return {{"P1", e.p1}, {"Delta", e.delta}, {"Pk", e.pk},       {"ek", e.ek},
          {"c", e.c},   {"threshold", e.threshold}, {"beneficial", e.beneficial}};
}

}  // namespace tmr
