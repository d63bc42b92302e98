#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "tmr/error.hpp"
#include "tmr/forest.hpp"
#include "tmr/selection.hpp"

using namespace tmr;

namespace {

// Column 2 copies the label, the rest is noise; column 4 is constant.
void planted(std::size_t n, std::uint64_t seed, Matrix& X, std::vector<int>& y) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  X = Matrix();
  y.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    X.append_row(std::vector<double>{g(rng), g(rng), static_cast<double>(label), g(rng), 3.0});
    y.push_back(label);
  }
}

}  // namespace

TEST(Task, NamesAndLabels) {
  const auto tasks = all_tasks();
  ASSERT_EQ(tasks.size(), 11u);
  EXPECT_EQ(task_name(tasks[0]), "all-modes");
  EXPECT_EQ(task_name(tasks[1]), "bike-car");
  EXPECT_EQ(task_name(tasks[10]), "run-bus");
  for (const auto& t : tasks) EXPECT_EQ(parse_task(task_name(t)), t);
  EXPECT_EQ(parse_task("car-bike"), tasks[1]);
  EXPECT_EQ(tasks[4].labels(), (std::vector<int>{0, 4}));
  EXPECT_THROW(parse_task("car-car"), FormatError);
  EXPECT_THROW(parse_task("plane"), FormatError);
  EXPECT_EQ(task_rows(std::vector<int>{0, 4, 2, 0, 1}, tasks[4]), (std::vector<std::size_t>{0, 1, 3}));
}

TEST(Ranking, LabelCopyRanksFirstAndConstantScoresZero) {
  Matrix X;
  std::vector<int> y;
  planted(200, 1, X, y);
  const auto task = TaskId::for_pair(make_pair(Mode::Bike, Mode::Car));
  const auto r = rank_features(X, y, std::vector<int>{10, 11, 12, 13, 14}, task, 50, 7);
  const auto best = std::max_element(r.scores.begin(), r.scores.end()) - r.scores.begin();
  EXPECT_EQ(r.feature_ids[static_cast<std::size_t>(best)], 12);
  EXPECT_EQ(r.scores[4], 0.0);
  EXPECT_EQ(select_top_k(r, 1).ids, std::vector<int>{12});
}

TEST(Ranking, DeterministicForASeed) {
  Matrix X;
  std::vector<int> y;
  planted(150, 2, X, y);
  const auto task = TaskId::for_pair(make_pair(Mode::Bike, Mode::Car));
  const std::vector<int> ids{0, 1, 2, 3, 4};
  EXPECT_EQ(rank_features(X, y, ids, task, 30, 5).scores, rank_features(X, y, ids, task, 30, 5).scores);
}

TEST(Ranking, ScoresSumToMeanRootNormalizedDecrease) {
  Matrix X;
  std::vector<int> y;
  planted(150, 3, X, y);
  for (std::size_t r = 0; r < X.rows(); r += 7) y[r] = 1 - y[r];  // make the label copy imperfect
  const auto task = TaskId::for_pair(make_pair(Mode::Bike, Mode::Car));
  const auto ranking = rank_features(X, y, std::vector<int>{0, 1, 2, 3, 4}, task, 40, 9);
  const RfModel forest = rf_train(X, y, ForestParams{40, 0, true}, 9);
  double expected = 0.0;
  for (const auto& t : forest.trees) {
    double leaves = 0.0;
    for (const auto& n : t.nodes)
      if (n.is_leaf()) leaves += n.weight * n.impurity;
    expected += (t.nodes[0].weight * t.nodes[0].impurity - leaves) / t.nodes[0].weight;
  }
  expected /= 40.0;
  const double total = std::accumulate(ranking.scores.begin(), ranking.scores.end(), 0.0);
  EXPECT_NEAR(total, expected, 1e-9);
  EXPECT_LE(total, 0.5 + 1e-12);  // Gini impurity of two classes is at most 1/2
}

TEST(Ranking, RejectsSingleClassAndMissingModes) {
  Matrix X;
  std::vector<int> y;
  planted(40, 4, X, y);
  const std::vector<int> ids{0, 1, 2, 3, 4};
  std::vector<int> one(y.size(), 0);
  EXPECT_THROW(rank_features(X, one, ids, TaskId::all_modes(), 10, 1), InvalidArgument);
  try {
    rank_features(X, y, ids, TaskId::all_modes(), 10, 1);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("walk"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("bus"), std::string::npos);
  }
}

TEST(TopK, OrderTiesIdentityAndIdempotence) {
  ImportanceRanking r{TaskId::all_modes(), {5, 3, 9, 1, 7}, {0.2, 0.5, 0.2, 0.0, 0.1}};
  EXPECT_EQ(select_top_k(r, 3).ids, (std::vector<int>{3, 5, 9}));
  const auto all = select_top_k(r, 5);
  auto sorted = all.ids;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{1, 3, 5, 7, 9}));
  // Re-ranking the chosen ids with their own scores yields the same subset.
  const auto top = select_top_k(r, 3);
  ImportanceRanking again{r.task, top.ids, {0.5, 0.2, 0.2}};
  EXPECT_EQ(select_top_k(again, 3), top);
  EXPECT_THROW(select_top_k(r, 6), InvalidArgument);
  EXPECT_THROW(select_top_k(r, 0), InvalidArgument);
}

TEST(TopK, FullCatalogKeepsEveryFeature) {
  ImportanceRanking r{TaskId::all_modes(), {}, {}};
  for (int id = 0; id < 345; ++id) {
    r.feature_ids.push_back(id);
    r.scores.push_back(static_cast<double>((id * 37) % 11));
  }
  auto ids = select_top_k(r, 345).ids;
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(ids, r.feature_ids);
}

TEST(Subset, JsonAndCsv) {
  const FeatureSubset s{TaskId::for_pair(make_pair(Mode::Car, Mode::Bus)), {4, 200, 17}};
  EXPECT_EQ(subset_from_json(nlohmann::json::parse(to_json(s).dump())), s);
  EXPECT_THROW(subset_from_json(nlohmann::json::object()), FormatError);
  const std::vector<ImportanceRanking> rankings{{s.task, {0, 1}, {0.25, 0.0}}};
  const std::string csv = ranking_to_csv(rankings);
  EXPECT_NE(csv.find("car-bus,0,t_accel_x_mean,"), std::string::npos);
}

TEST(Subset, TasksPickDifferentFeaturesOnGeneratedData) {
  const Dataset& ds = fixture::small_dataset(120.0);
  auto subset_for = [&](const TaskId& task) {
    const auto rows = task_rows(ds.labels, task);
    const Dataset part = ds.select_rows(rows);
    return select_top_k(rank_features(part.X, part.labels, part.feature_ids, task, 50, 3), 100);
  };
  const auto all = subset_for(TaskId::all_modes());
  const auto car_bus = subset_for(TaskId::for_pair(make_pair(Mode::Car, Mode::Bus)));
  EXPECT_NE(all.ids, car_bus.ids);
  EXPECT_EQ(all.ids.size(), 100u);
}
