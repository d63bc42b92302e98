#include "tmr/selection.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tmr/catalog.hpp"
#include "tmr/error.hpp"
#include "tmr/fileio.hpp"
#include "tmr/forest.hpp"
#include "tmr/probability.hpp"

namespace tmr {

std::vector<int> TaskId::labels() const {
  if (!pair) return {0, 1, 2, 3, 4};
  return {mode_index(pair->first), mode_index(pair->second)};
}

bool TaskId::contains(int label) const {
  if (!pair) return label >= 0 && label < kModeCount;
  return label == mode_index(pair->first) || label == mode_index(pair->second);
}

std::string task_name(const TaskId& t) { return t.pair ? pair_name(*t.pair) : "all-modes"; }

TaskId parse_task(std::string_view s) {
  if (s == "all-modes") return TaskId::all_modes();
  const auto dash = s.find('-');
  if (dash == std::string_view::npos) throw FormatError("unknown task '" + std::string(s) + "'");
  const Mode a = parse_mode(s.substr(0, dash));
  const Mode b = parse_mode(s.substr(dash + 1));
  if (a == b) throw FormatError("task '" + std::string(s) + "' names the same mode twice");
  return TaskId::for_pair(make_pair(a, b));
}

std::vector<TaskId> all_tasks() {
  std::vector<TaskId> out{TaskId::all_modes()};
  for (const auto& p : all_mode_pairs()) out.push_back(TaskId::for_pair(p));
  return out;
}

std::vector<std::size_t> task_rows(std::span<const int> labels, const TaskId& task) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < labels.size(); ++r)
    if (task.contains(labels[r])) rows.push_back(r);
  return rows;
}

ImportanceRanking rank_features(const Matrix& X, std::span<const int> y, std::span<const int> feature_ids,
                                const TaskId& task, int n_trees, std::uint64_t seed) {
  if (feature_ids.size() != X.cols()) throw InvalidArgument("rank_features: one feature id per column required");
  const auto classes = distinct_classes(y);
  if (classes.size() < 2) throw InvalidArgument("rank_features: task " + task_name(task) + " has a single class");
  if (classes != task.labels()) {
    std::string missing;
    for (int label : task.labels())
      if (!std::binary_search(classes.begin(), classes.end(), label))
        missing += (missing.empty() ? "" : ", ") + std::string(mode_name(mode_from_index(label)));
    throw InvalidArgument("rank_features: task " + task_name(task) +
                          (missing.empty() ? " received labels outside the task" : " lacks rows of " + missing));
  }
  ForestParams params;
  params.n_trees = n_trees;
  const RfModel forest = rf_train(X, y, params, seed);
  return {task, std::vector<int>(feature_ids.begin(), feature_ids.end()), gini_importance(forest)};
}

FeatureSubset select_top_k(const ImportanceRanking& ranking, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > ranking.feature_ids.size())
    throw InvalidArgument("select_top_k: k = " + std::to_string(k) + " but the ranking has " +
                          std::to_string(ranking.feature_ids.size()) + " features");
  std::vector<std::size_t> order(ranking.feature_ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ranking.scores[a] != ranking.scores[b]) return ranking.scores[a] > ranking.scores[b];
    return ranking.feature_ids[a] < ranking.feature_ids[b];
  });
  FeatureSubset subset{ranking.task, {}};
  for (int i = 0; i < k; ++i) subset.ids.push_back(ranking.feature_ids[order[static_cast<std::size_t>(i)]]);
  return subset;
}

std::string ranking_to_csv(std::span<const ImportanceRanking> rankings) {
  const auto& catalog = FeatureCatalog::standard();
  std::ostringstream out;
  out << "task,feature_id,feature_name,score\n";
  for (const auto& r : rankings) {
    std::vector<std::size_t> order(r.feature_ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r.feature_ids[a] < r.feature_ids[b]; });
    for (std::size_t i : order)
      out << task_name(r.task) << ',' << r.feature_ids[i] << ',' << catalog[r.feature_ids[i]].name << ','
          << format_double(r.scores[i]) << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const FeatureSubset& s) { return {{"task", task_name(s.task)}, {"ids", s.ids}}; }

FeatureSubset subset_from_json(const nlohmann::json& j) {
  try {
    FeatureSubset s{parse_task(j.at("task").get<std::string>()), j.at("ids").get<std::vector<int>>()};
    auto sorted = s.ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw FormatError("subset " + task_name(s.task) + ": duplicate feature id");
    for (int id : sorted)
      if (id < 0 || id >= kFeatureCount) throw FormatError("subset " + task_name(s.task) + ": id out of range");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("subset: ") + e.what());
  }
}

}  // namespace tmr
