#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "fixtures.hpp"
#include "tmr/benefit.hpp"
#include "tmr/error.hpp"
#include "tmr/hierarchy.hpp"

using namespace tmr;

namespace {

TrainSettings quick_settings(Framework f = Framework::Hierarchical) {
  TrainSettings s;
  s.framework = f;
  s.params.rf.n_trees = 20;
  s.rank_trees = 20;
  s.select_k = 30;
  s.seed = 11;
  return s;
}

const HierarchicalModel& small_model() {
  static const HierarchicalModel m = train_hierarchy(fixture::small_dataset(60.0), quick_settings());
  return m;
}

std::array<double, kModePairCount> filled(double v) {
  std::array<double, kModePairCount> a{};
  a.fill(v);
  return a;
}

}  // namespace

TEST(Fusion, UniformLikelihoodKeepsFirstLayerRanking) {
  const Fusion f = fuse(0.6, 0.3, 0.5, 0.5, 2, 4);
  EXPECT_EQ(f.winner, 2);
  EXPECT_NEAR(f.posterior[0], 2.0 / 3.0, 1e-15);
}

TEST(Fusion, LikelihoodCanOverturnThePrior) {
  const Fusion f = fuse(0.40, 0.35, 0.2, 0.8, 1, 4);
  EXPECT_EQ(f.winner, 4);
  EXPECT_NEAR(f.posterior[1], 7.0 / 9.0, 1e-15);
  EXPECT_NEAR(f.posterior[0] + f.posterior[1], 1.0, 1e-15);
}

TEST(Fusion, TiesGoToTheFirstLayerWinner) {
  const std::vector<double> uniform(5, 0.2);
  const auto [i, j] = top_two(uniform);
  EXPECT_EQ(i, 0);
  EXPECT_EQ(j, 1);
  EXPECT_EQ(fuse(0.2, 0.2, 0.5, 0.5, i, j).winner, 0);
}

TEST(Fusion, RecomputationOverRandomInputs) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const double pi = u(rng), pj = u(rng) * pi, qi = u(rng);
    const Fusion f = fuse(pi, pj, qi, 1.0 - qi, 0, 1);
    const double z = pi * qi + pj * (1.0 - qi);
    if (z == 0.0) continue;
    EXPECT_DOUBLE_EQ(f.posterior[0], pi * qi / z);
    EXPECT_EQ(f.winner, f.posterior[1] > f.posterior[0] ? 1 : 0);
  }
}

TEST(TopTwo, PicksLargestAndRunnerUp) {
  EXPECT_EQ(top_two(std::vector<double>{0.1, 0.3, 0.05, 0.3, 0.25}), std::make_pair(1, 3));
  EXPECT_EQ(top_two(std::vector<double>{0.5, 0.1, 0.1, 0.1, 0.2}), std::make_pair(0, 4));
}

TEST(Beta, PosteriorMeans) {
  EXPECT_DOUBLE_EQ(estimate_beta_posterior(std::vector<int>{}).mean(), 0.5);
  const std::vector<int> eight{1, 1, 1, 1, 0, 1, 1, 1, 0, 1};
  const auto p = estimate_beta_posterior(eight);
  EXPECT_DOUBLE_EQ(p.mean(), 0.75);
  EXPECT_DOUBLE_EQ(p.alpha(), 9.0);
  EXPECT_DOUBLE_EQ(p.beta(), 3.0);
  const std::vector<int> all(1000, 1);
  EXPECT_DOUBLE_EQ(estimate_beta_posterior(all).mean(), 1001.0 / 1002.0);
  EXPECT_THROW(estimate_beta_posterior(std::vector<int>{1, 2}), InvalidArgument);
  EXPECT_THROW(estimate_beta_posterior(eight, 0.0, 1.0), InvalidArgument);
}

TEST(Beta, MeanIsAConvexCombination) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> n_dist(1, 200);
  std::uniform_real_distribution<double> prior(0.2, 5.0);
  for (int k = 0; k < 500; ++k) {
    const int n = n_dist(rng);
    std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    std::vector<int> outcomes(static_cast<std::size_t>(n));
    for (int& o : outcomes) o = coin(rng) ? 1 : 0;
    const double a = prior(rng), b = prior(rng);
    const auto post = estimate_beta_posterior(outcomes, a, b);
    const double prior_mean = a / (a + b);
    const double rate = static_cast<double>(post.successes) / n;
    if (prior_mean == rate) continue;
    EXPECT_GT(post.mean(), std::min(prior_mean, rate));
    EXPECT_LT(post.mean(), std::max(prior_mean, rate));
  }
}

TEST(Benefit, BoundaryExamples) {
  const auto perfect = benefit_from_estimates(0.9, 0.0, filled(1.0), 0.1);
  EXPECT_EQ(perfect.threshold, 0.0);
  EXPECT_FALSE(perfect.beneficial);

  const auto yes = benefit_from_estimates(0.9, 0.05, filled(0.95), 0.1);
  EXPECT_NEAR(yes.threshold, 0.9 * 0.05 / 0.95, 1e-12);
  EXPECT_NEAR(yes.threshold, 0.04737, 1e-5);
  EXPECT_TRUE(yes.beneficial);

  const auto no = benefit_from_estimates(0.9, 0.04, filled(0.95), 0.1);
  EXPECT_FALSE(no.beneficial);
  EXPECT_NEAR(no.ek[3], 0.05, 1e-15);

  EXPECT_THROW(benefit_from_estimates(0.9, 0.1, filled(0.0), 0.1), ComputeError);
}

TEST(Benefit, ResidualIdentity) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100000; ++k) {
    const double p1 = u(rng), delta = u(rng) * (1.0 - p1);
    std::array<double, kModePairCount> pk{}, ek{};
    for (std::size_t m = 0; m < pk.size(); ++m) {
      pk[m] = u(rng);
      ek[m] = 1.0 - pk[m];
    }
    EXPECT_NEAR(two_layer_accuracy(p1, delta, pk, 0.1), two_layer_accuracy_from_errors(p1, delta, ek, 0.1), 1e-12);
  }
}

TEST(Benefit, FromOutcomesUsesPosteriorMeans) {
  ValidationOutcomes o;
  o.top1 = {1, 1, 1, 1, 1, 1, 1, 1, 0, 0};
  o.top2 = {1, 1, 1, 1, 1, 1, 1, 1, 1, 0};
  for (auto& p : o.pair_correct) p = {1, 1, 1};
  const auto e = estimate_benefit(o);
  EXPECT_DOUBLE_EQ(e.p1, 0.75);
  EXPECT_NEAR(e.delta, 10.0 / 12.0 - 0.75, 1e-15);
  EXPECT_DOUBLE_EQ(e.pk[0], 0.8);
  const auto j = to_json(e);
  for (const char* key : {"P1", "Delta", "Pk", "threshold", "beneficial"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["Pk"].size(), 10u);
}

TEST(Hierarchy, TrainsOneFirstLayerAndTenPairModels) {
  const auto& m = small_model();
  EXPECT_EQ(m.pairs.size(), 10u);
  EXPECT_EQ(m.first.subset.ids.size(), 30u);
  EXPECT_EQ(m.first.classifier.classes(), (std::vector<int>{0, 1, 2, 3, 4}));
  for (std::size_t k = 0; k < m.pairs.size(); ++k) {
    const auto p = all_mode_pairs()[k];
    EXPECT_EQ(m.pairs[k].subset.task, TaskId::for_pair(p));
    EXPECT_EQ(m.pairs[k].classifier.classes(), (std::vector<int>{mode_index(p.first), mode_index(p.second)}));
  }
}

TEST(Hierarchy, TraditionalSharesTheFirstLayer) {
  const auto traditional = train_hierarchy(fixture::small_dataset(60.0), quick_settings(Framework::Traditional));
  EXPECT_TRUE(traditional.pairs.empty());
  EXPECT_EQ(traditional.first, small_model().first);
}

TEST(Hierarchy, ClassifyInvariants) {
  const auto& m = small_model();
  const Dataset& ds = fixture::small_dataset(60.0);
  for (std::size_t r = 0; r < ds.rows(); r += 3) {
    const auto out = classify(m, ds.X.row(r));
    EXPECT_NE(out.i, out.j);
    EXPECT_TRUE(out.final_mode == out.i || out.final_mode == out.j);
    ASSERT_TRUE(out.second.has_value());
    EXPECT_NEAR(out.fused[0] + out.fused[1], 1.0, 1e-12);
    const double pi = out.first.of(out.i), pj = out.first.of(out.j);
    const double qi = out.second->of(out.i), qj = out.second->of(out.j);
    const double z = pi * qi + pj * qj;
    if (z > 0.0) EXPECT_DOUBLE_EQ(out.fused[0], pi * qi / z);
    EXPECT_EQ(out.i, out.first.argmax());
  }
}

TEST(Hierarchy, MissingModeIsNamed) {
  const Dataset& ds = fixture::small_dataset(60.0);
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < ds.rows(); ++r)
    if (ds.labels[r] != mode_index(Mode::Run)) rows.push_back(r);
  try {
    train_hierarchy(ds, quick_settings(), rows);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("run"), std::string::npos);
  }
}

TEST(Hierarchy, TopTwoDominatesTopOne) {
  const auto o = collect_outcomes(small_model(), fixture::small_dataset(60.0));
  ASSERT_EQ(o.top1.size(), o.top2.size());
  for (std::size_t r = 0; r < o.top1.size(); ++r) EXPECT_LE(o.top1[r], o.top2[r]);
  for (const auto& p : o.pair_correct) EXPECT_EQ(p.size(), 120u);
}

TEST(Bundle, RoundTripPreservesPredictions) {
  const auto dir = std::filesystem::temp_directory_path() / "tmr_bundle_test";
  std::filesystem::remove_all(dir);
  const nlohmann::json fp{{"seed", "11"}};
  write_bundle(dir, small_model(), fp);
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "bike-car.model.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "subsets" / "all-modes.json"));
  const auto back = read_bundle(dir);
  EXPECT_EQ(back, small_model());
  EXPECT_EQ(read_bundle_fingerprint(dir), fp);
  const Dataset& ds = fixture::small_dataset(60.0);
  for (std::size_t r = 0; r < ds.rows(); r += 11) {
    const auto a = classify(small_model(), ds.X.row(r)), b = classify(back, ds.X.row(r));
    EXPECT_EQ(a.first.probs, b.first.probs);
    EXPECT_EQ(a.final_mode, b.final_mode);
  }
  std::filesystem::remove(dir / "walk-run.model.json");
  EXPECT_THROW(read_bundle(dir), FormatError);
  std::filesystem::remove_all(dir);
}
