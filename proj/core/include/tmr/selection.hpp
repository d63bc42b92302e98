#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tmr/matrix.hpp"
#include "tmr/modes.hpp"

namespace tmr {

/// A classification task: all five modes, or one unordered mode pair.
struct TaskId {
  std::optional<ModePair> pair;

  static TaskId all_modes() { return {}; }
  static TaskId for_pair(ModePair p) { return {p}; }
  bool is_pair() const { return pair.has_value(); }
  /// Labels (mode indices) taking part in the task, ascending.
  std::vector<int> labels() const;
  bool contains(int label) const;

  friend bool operator==(const TaskId&, const TaskId&) = default;
};

std::string task_name(const TaskId& t);  // "all-modes" or "bike-car"
TaskId parse_task(std::string_view s);
/// all-modes followed by the 10 pairs in pair_index order.
std::vector<TaskId> all_tasks();

/// Rows whose label belongs to the task, ascending.
std::vector<std::size_t> task_rows(std::span<const int> labels, const TaskId& task);

struct ImportanceRanking {
  TaskId task;
  std::vector<int> feature_ids;  // catalog ids, one per column
  std::vector<double> scores;    // aligned with feature_ids
};

struct FeatureSubset {
  TaskId task;
  std::vector<int> ids;  // descending score, ties by lower id

  friend bool operator==(const FeatureSubset&, const FeatureSubset&) = default;
};

inline constexpr int kDefaultSubsetSize = 100;
inline constexpr int kDefaultRankTrees = 200;

/// Mean decrease in Gini impurity from a random forest of `n_trees` trees.
/// `y` must hold exactly the labels of `task`.
ImportanceRanking rank_features(const Matrix& X, std::span<const int> y, std::span<const int> feature_ids,
                                const TaskId& task, int n_trees, std::uint64_t seed);

/// The k best ids; throws when k exceeds the ranking size.
FeatureSubset select_top_k(const ImportanceRanking& ranking, int k = kDefaultSubsetSize);

/// CSV rows `task,feature_id,feature_name,score`, by feature id.
std::string ranking_to_csv(std::span<const ImportanceRanking> rankings);
nlohmann::json to_json(const FeatureSubset& s);
FeatureSubset subset_from_json(const nlohmann::json& j);

}  // namespace tmr
