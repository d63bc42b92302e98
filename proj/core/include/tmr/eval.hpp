#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tmr/catalog.hpp"
#include "tmr/dataset.hpp"
#include "tmr/hierarchy.hpp"

namespace tmr {

struct FoldPlan {
  int k = 10;
  std::uint64_t seed = 0;
  bool grouped = false;
  std::vector<std::vector<std::size_t>> folds;  // test rows of each fold, ascending

  std::vector<std::size_t> train_rows(int fold) const;
  std::size_t row_count() const;
  /// Hex digest of the fold assignment, for comparing plans across reports.
  std::string digest() const;
  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Per class: shuffle the rows with the seed, then deal them round robin,
/// the dealing position carrying over from one class to the next.
FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed);

/// Same dealing over whole groups (source traces) of each class, so no
/// group is split across folds. Every class needs at least k groups.
FoldPlan grouped_kfold(std::span<const int> labels, std::span<const int> groups, int k, std::uint64_t seed);

/// counts[predicted][actual].
struct ConfusionMatrix {
  int n = kModeCount;
  std::vector<std::vector<long>> counts;

  long total() const;
  long predicted(int c) const;  // row sum
  long actual(int c) const;     // column sum
  /// Percentages; 0 when the row (column) is empty.
  double precision(int c) const;
  double recall(int c) const;
  bool precision_degenerate(int c) const { return predicted(c) == 0; }
  bool recall_degenerate(int c) const { return actual(c) == 0; }
  double accuracy() const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> truths, int n_classes = kModeCount);

struct EvalSettings {
  TrainSettings train;
  FeatureDomain domain = FeatureDomain::Pooled;
  int folds = 10;
  bool group_by_trace = false;
};

/// One classified window.
struct WindowRecord {
  std::size_t row = 0;
  int fold = 0;
  int truth = 0;
  int top1 = 0;
  int top2 = 0;
  int final_mode = 0;
};

struct CvReport {
  nlohmann::json fingerprint;
  std::vector<double> fold_accuracy;  // percent
  double mean_accuracy = 0.0;
  ConfusionMatrix confusion;
  std::string plan_digest;
  std::vector<WindowRecord> records;  // ordered by row
};

FoldPlan make_fold_plan(const Dataset& ds, const EvalSettings& settings);

/// Models of one fold, trained on that fold's training rows only.
HierarchicalModel train_fold(const Dataset& ds, const EvalSettings& settings, const FoldPlan& plan, int fold);

/// `ds` may hold more columns than the domain needs; it is restricted first.
/// The plan is derived from the settings when not supplied.
CvReport cross_validate(const Dataset& ds, const EvalSettings& settings, const nlohmann::json& fingerprint,
                        const FoldPlan* plan = nullptr);

enum class SweepAxis { KnnK, CartPruning, RfTrees };

std::string_view sweep_axis_name(SweepAxis a);  // "knn_k", "cart_pruning", "rf_trees"
SweepAxis parse_sweep_axis(std::string_view s);
/// 1..15, 2..20, 200..400 step 50.
std::vector<int> sweep_values(SweepAxis a);

struct SweepPoint {
  int value = 0;
  CvReport report;
};

/// One cross-validation per value over a single shared fold plan. Throws
/// InvalidArgument when no configured layer uses the axis's algorithm.
/// `fingerprint` gets the axis value written under the axis key.
std::vector<SweepPoint> sweep(const Dataset& ds, SweepAxis axis, std::span<const int> values,
                              const EvalSettings& settings, const nlohmann::json& fingerprint);

std::vector<int> permute_labels(std::span<const int> labels, std::uint64_t seed);

nlohmann::json to_json(const ConfusionMatrix& m);
nlohmann::json to_json(const CvReport& r);
/// Fold accuracies with their average, then the confusion matrix with a
/// precision column and a recall row.
std::string report_table(const CvReport& r);
std::string sweep_to_csv(SweepAxis axis, std::span<const SweepPoint> points);
std::string records_to_csv(std::span<const WindowRecord> records);

}  // namespace tmr
