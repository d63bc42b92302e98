#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tmr/classifier.hpp"
#include "tmr/dataset.hpp"
#include "tmr/scaler.hpp"
#include "tmr/selection.hpp"

namespace tmr {

enum class Framework { Traditional, Hierarchical };

std::string_view framework_name(Framework f);
Framework parse_framework(std::string_view s);

/// Everything needed to train one task model.
struct TrainSettings {
  Framework framework = Framework::Hierarchical;
  Algorithm first_layer = Algorithm::Rf;
  Algorithm second_layer = Algorithm::Svm;
  ClassifierParams params;
  int select_k = kDefaultSubsetSize;
  int rank_trees = kDefaultRankTrees;
  double c = 0.1;
  std::uint64_t seed = 42;
};

/// A classifier bound to its task, feature subset and scaler.
struct TaskModel {
  FeatureSubset subset;
  Scaler scaler;
  Classifier classifier;
  std::vector<std::size_t> columns;  // positions of subset ids in the model input

  /// Subset + scaling + prediction on an unscaled input row.
  ProbabilityVector predict(std::span<const double> input) const;
  friend bool operator==(const TaskModel&, const TaskModel&) = default;
};

/// Ranks features on `rows` of `ds` restricted to the task, keeps the top
/// select_k, fits the scaler and trains `algorithm`; nothing outside `rows`
/// is read.
TaskModel train_task_model(const Dataset& ds, std::span<const std::size_t> rows, const TaskId& task,
                           Algorithm algorithm, const TrainSettings& settings, std::uint64_t seed);

/// First layer over all five modes plus, for the hierarchical framework, one
/// binary model per mode pair. A traditional model has no pair models.
struct HierarchicalModel {
  Framework framework = Framework::Hierarchical;
  std::vector<int> input_ids;  // catalog ids of the expected input columns
  TaskModel first;
  std::vector<TaskModel> pairs;  // indexed by pair_index
  double c = 0.1;

  friend bool operator==(const HierarchicalModel&, const HierarchicalModel&) = default;
};

/// Trains on `rows` of `ds` (every row when empty). Throws InvalidArgument
/// naming any absent mode.
HierarchicalModel train_hierarchy(const Dataset& ds, const TrainSettings& settings,
                                  std::span<const std::size_t> rows = {});

/// Posterior over the candidates {i, j}: p(m) q(m) normalised.
struct Fusion {
  std::array<double, 2> posterior{};
  int winner = 0;  // i unless the posterior strictly prefers j
};

Fusion fuse(double p_i, double p_j, double q_i, double q_j, int i, int j);

/// Indices of the largest and second largest entries, ties to lower index.
std::pair<int, int> top_two(std::span<const double> p);

struct LayerOutcome {
  ProbabilityVector first;  // over the five modes
  int i = 0;                // first-layer argmax
  int j = 1;                // runner-up
  std::optional<ProbabilityVector> second;  // over {i, j}; absent for traditional
  std::array<double, 2> fused{1.0, 0.0};    // posterior of i and j
  int final_mode = 0;
};

/// Classifies one unscaled input row laid out as `model.input_ids`.
LayerOutcome classify(const HierarchicalModel& model, std::span<const double> input);

/// Bundle directory: manifest.json, one `<task>.model.json` per task model
/// (classifier and scaler) and `subsets/<task>.json`.
void write_bundle(const std::filesystem::path& dir, const HierarchicalModel& model, const nlohmann::json& fingerprint);
HierarchicalModel read_bundle(const std::filesystem::path& dir);
nlohmann::json read_bundle_fingerprint(const std::filesystem::path& dir);

}  // namespace tmr
