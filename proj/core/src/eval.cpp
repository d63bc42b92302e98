#include "tmr/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "tmr/error.hpp"
#include "tmr/fileio.hpp"
#include "tmr/parallel.hpp"
#include "tmr/rng.hpp"

namespace tmr {

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (int f = 0; f < static_cast<int>(folds.size()); ++f)
    if (f != fold) rows.insert(rows.end(), folds[static_cast<std::size_t>(f)].begin(), folds[static_cast<std::size_t>(f)].end());
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::size_t FoldPlan::row_count() const {
  std::size_t n = 0;
  for (const auto& f : folds) n += f.size();
  return n;
}

std::string FoldPlan::digest() const {
  std::vector<int> assignment(row_count(), -1);
  for (std::size_t f = 0; f < folds.size(); ++f)
    for (std::size_t r : folds[f])
      if (r < assignment.size()) assignment[r] = static_cast<int>(f);
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(k));
  for (int a : assignment) h = splitmix64(h ^ static_cast<std::uint64_t>(a + 1));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void check_k(int k) {
  if (k < 2) throw InvalidArgument("fold count must be at least 2");
}

// Deals `units` (already grouped per class) round robin into k folds.
FoldPlan deal(const std::map<int, std::vector<std::vector<std::size_t>>>& units, int k, std::uint64_t seed, bool grouped) {
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.grouped = grouped;
  plan.folds.resize(static_cast<std::size_t>(k));
  std::size_t next = 0;
  for (const auto& [label, list] : units) {
    std::vector<std::size_t> order(list.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, grouped ? "folds/grouped" : "folds", static_cast<std::uint64_t>(label)));
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t u : order) {
      auto& fold = plan.folds[next % static_cast<std::size_t>(k)];
      fold.insert(fold.end(), list[u].begin(), list[u].end());
      ++next;
    }
  }
  for (auto& f : plan.folds) std::sort(f.begin(), f.end());
  return plan;
}

}  // namespace

FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed) {
  check_k(k);
  std::map<int, std::vector<std::vector<std::size_t>>> units;
  for (std::size_t r = 0; r < labels.size(); ++r) units[labels[r]].push_back({r});
  for (const auto& [label, list] : units)
    if (list.size() < static_cast<std::size_t>(k))
      throw InvalidArgument("class " + std::to_string(label) + " has " + std::to_string(list.size()) +
                            " rows, fewer than the " + std::to_string(k) + " folds");
  return deal(units, k, seed, false);
}

FoldPlan grouped_kfold(std::span<const int> labels, std::span<const int> groups, int k, std::uint64_t seed) {
  check_k(k);
  if (groups.size() != labels.size()) throw InvalidArgument("grouped folds need one group per row");
  std::map<int, std::map<int, std::vector<std::size_t>>> by_class;
  for (std::size_t r = 0; r < labels.size(); ++r) by_class[labels[r]][groups[r]].push_back(r);
  std::map<int, std::vector<std::vector<std::size_t>>> units;
  for (auto& [label, g] : by_class) {
    if (g.size() < static_cast<std::size_t>(k))
      throw InvalidArgument("class " + std::to_string(label) + " has " + std::to_string(g.size()) +
                            " traces, fewer than the " + std::to_string(k) +
                            " folds (raise segments_per_mode or disable group_by_trace)");
    for (auto& [group, rows] : g) units[label].push_back(std::move(rows));
  }
  return deal(units, k, seed, true);
}

long ConfusionMatrix::total() const {
  long t = 0;
  for (const auto& row : counts) t = std::accumulate(row.begin(), row.end(), t);
  return t;
}

long ConfusionMatrix::predicted(int c) const {
  const auto& row = counts[static_cast<std::size_t>(c)];
  return std::accumulate(row.begin(), row.end(), 0L);
}

long ConfusionMatrix::actual(int c) const {
  long s = 0;
  for (const auto& row : counts) s += row[static_cast<std::size_t>(c)];
  return s;
}

double ConfusionMatrix::precision(int c) const {
  const long p = predicted(c);
  return p == 0 ? 0.0 : 100.0 * static_cast<double>(counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)]) / static_cast<double>(p);
}

double ConfusionMatrix::recall(int c) const {
  const long a = actual(c);
  return a == 0 ? 0.0 : 100.0 * static_cast<double>(counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)]) / static_cast<double>(a);
}

double ConfusionMatrix::accuracy() const {
  long diag = 0;
  for (int c = 0; c < n; ++c) diag += counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
  const long t = total();
  return t == 0 ? 0.0 : 100.0 * static_cast<double>(diag) / static_cast<double>(t);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  if (o.n != n) throw InvalidArgument("confusion matrices differ in size");
  for (std::size_t a = 0; a < counts.size(); ++a)
    for (std::size_t b = 0; b < counts.size(); ++b) counts[a][b] += o.counts[a][b];
  return *this;
}

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> truths, int n_classes) {
  if (predictions.size() != truths.size())
    throw InvalidArgument("confusion: " + std::to_string(predictions.size()) + " predictions for " +
                          std::to_string(truths.size()) + " truths");
  ConfusionMatrix m;
  m.n = n_classes;
  m.counts.assign(static_cast<std::size_t>(n_classes), std::vector<long>(static_cast<std::size_t>(n_classes), 0));
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (predictions[i] < 0 || predictions[i] >= n_classes || truths[i] < 0 || truths[i] >= n_classes)
      throw InvalidArgument("confusion: label out of range");
    ++m.counts[static_cast<std::size_t>(predictions[i])][static_cast<std::size_t>(truths[i])];
  }
  return m;
}

FoldPlan make_fold_plan(const Dataset& ds, const EvalSettings& settings) {
  const std::uint64_t seed = derive_seed(settings.train.seed, "cv/plan", 0);
  return settings.group_by_trace ? grouped_kfold(ds.labels, ds.groups, settings.folds, seed)
                                 : stratified_kfold(ds.labels, settings.folds, seed);
}

namespace {

EvalSettings fold_settings(const EvalSettings& settings, int fold) {
  EvalSettings s = settings;
  s.train.seed = derive_seed(settings.train.seed, "cv/fold", static_cast<std::uint64_t>(fold));
  return s;
}

template <class F>
auto annotate_fold(int fold, F&& body) {
  const std::string where = "fold " + std::to_string(fold) + ": ";
  try {
    return body();
  } catch (const SvmConvergenceError& e) {
    throw SvmConvergenceError(where + e.what(), e.residual());
  } catch (const ComputeError& e) {
    throw ComputeError(where + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(where + e.what());
  }
}

}  // namespace

HierarchicalModel train_fold(const Dataset& ds, const EvalSettings& settings, const FoldPlan& plan, int fold) {
  const Dataset view = ds.restrict(settings.domain);
  const auto rows = plan.train_rows(fold);
  return annotate_fold(fold, [&] { return train_hierarchy(view, fold_settings(settings, fold).train, rows); });
}

CvReport cross_validate(const Dataset& ds, const EvalSettings& settings, const nlohmann::json& fingerprint,
                        const FoldPlan* plan_in) {
  const Dataset view = ds.restrict(settings.domain);
  const FoldPlan plan = plan_in ? *plan_in : make_fold_plan(view, settings);
  if (plan.row_count() != view.rows()) throw InvalidArgument("fold plan does not cover the dataset");

  const auto k = static_cast<std::size_t>(plan.k);
  std::vector<std::vector<WindowRecord>> per_fold(k);
  parallel_for(k, [&](std::size_t f) {
    const int fold = static_cast<int>(f);
    const auto rows = plan.train_rows(fold);
    const HierarchicalModel model =
        annotate_fold(fold, [&] { return train_hierarchy(view, fold_settings(settings, fold).train, rows); });
    for (std::size_t r : plan.folds[f]) {
      const LayerOutcome o = classify(model, view.X.row(r));
      per_fold[f].push_back({r, fold, view.labels[r], o.i, o.j, o.final_mode});
    }
  });

  CvReport report;
  report.fingerprint = fingerprint;
  report.plan_digest = plan.digest();
  report.confusion = confusion(std::vector<int>{}, std::vector<int>{});
  for (const auto& recs : per_fold) {
    std::vector<int> pred, truth;
    for (const auto& r : recs) {
      pred.push_back(r.final_mode);
      truth.push_back(r.truth);
    }
    const ConfusionMatrix m = confusion(pred, truth);
    report.fold_accuracy.push_back(m.accuracy());
    report.confusion += m;
    report.records.insert(report.records.end(), recs.begin(), recs.end());
  }
  std::sort(report.records.begin(), report.records.end(),
            [](const WindowRecord& a, const WindowRecord& b) { return a.row < b.row; });
  report.mean_accuracy = std::accumulate(report.fold_accuracy.begin(), report.fold_accuracy.end(), 0.0) /
                         static_cast<double>(report.fold_accuracy.size());
  return report;
}

std::string_view sweep_axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::KnnK: return "knn_k";
    case SweepAxis::CartPruning: return "cart_pruning";
    case SweepAxis::RfTrees: return "rf_trees";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view s) {
  for (SweepAxis a : {SweepAxis::KnnK, SweepAxis::CartPruning, SweepAxis::RfTrees})
    if (sweep_axis_name(a) == s) return a;
  throw FormatError("unknown sweep axis '" + std::string(s) + "' (expected knn_k, cart_pruning or rf_trees)");
}

std::vector<int> sweep_values(SweepAxis a) {
  std::vector<int> v;
  switch (a) {
    case SweepAxis::KnnK:
      for (int k = 1; k <= 15; ++k) v.push_back(k);
      break;
    case SweepAxis::CartPruning:
      for (int p = 2; p <= 20; ++p) v.push_back(p);
      break;
    case SweepAxis::RfTrees:
      for (int t = 200; t <= 400; t += 50) v.push_back(t);
      break;
  }
  return v;
}

std::vector<SweepPoint> sweep(const Dataset& ds, SweepAxis axis, std::span<const int> values,
                              const EvalSettings& settings, const nlohmann::json& fingerprint) {
  const Algorithm needed = axis == SweepAxis::KnnK ? Algorithm::Knn : axis == SweepAxis::CartPruning ? Algorithm::Cart : Algorithm::Rf;
  const bool used = settings.train.first_layer == needed ||
                    (settings.train.framework == Framework::Hierarchical && settings.train.second_layer == needed);
  if (!used)
    throw InvalidArgument("sweep axis " + std::string(sweep_axis_name(axis)) + " needs a " +
                          std::string(algorithm_name(needed)) + " layer in the configuration");
  const Dataset view = ds.restrict(settings.domain);
  const FoldPlan plan = make_fold_plan(view, settings);
  std::vector<SweepPoint> out;
  for (int v : values) {
    EvalSettings s = settings;
    switch (axis) {
      case SweepAxis::KnnK: s.train.params.knn_k = v; break;
      case SweepAxis::CartPruning: s.train.params.cart_pruning = v; break;
      case SweepAxis::RfTrees: s.train.params.rf.n_trees = v; break;
    }
    nlohmann::json fp = fingerprint;
    fp[std::string(sweep_axis_name(axis))] = std::to_string(v);
    out.push_back({v, cross_validate(view, s, fp, &plan)});
  }
  return out;
}

std::vector<int> permute_labels(std::span<const int> labels, std::uint64_t seed) {
  std::vector<int> out(labels.begin(), labels.end());
  Rng rng(derive_seed(seed, "permute", 0));
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

nlohmann::json to_json(const ConfusionMatrix& m) {
  nlohmann::json precision = nlohmann::json::array(), recall = nlohmann::json::array();
  nlohmann::json degenerate = nlohmann::json::array();
  for (int c = 0; c < m.n; ++c) {
    precision.push_back(m.precision(c));
    recall.push_back(m.recall(c));
    if (m.precision_degenerate(c) || m.recall_degenerate(c)) degenerate.push_back(c);
  }
  return {{"layout", "predicted x actual"}, {"counts", m.counts}, {"precision", precision},
          {"recall", recall},               {"degenerate", degenerate}};
}

nlohmann::json to_json(const CvReport& r) {
  return {{"format", "tmr-cv-report"},
          {"version", 1},
          {"config", r.fingerprint},
          {"fold_plan", r.plan_digest},
          {"fold_accuracy", r.fold_accuracy},
          {"mean_accuracy", r.mean_accuracy},
          {"confusion", to_json(r.confusion)}};
}

std::string report_table(const CvReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "Fold  Accuracy (%)\n";
  for (std::size_t f = 0; f < r.fold_accuracy.size(); ++f)
    out << std::setw(4) << f + 1 << "  " << std::setw(12) << r.fold_accuracy[f] << "\n";
  out << " Avg  " << std::setw(12) << r.mean_accuracy << "\n\n";

  const auto& m = r.confusion;
  out << std::setw(12) << "pred\\actual";
  for (int c = 0; c < m.n; ++c) out << std::setw(9) << mode_name(mode_from_index(c));
  out << std::setw(11) << "Precision" << "\n";
  for (int p = 0; p < m.n; ++p) {
    out << std::setw(12) << mode_name(mode_from_index(p));
    for (int a = 0; a < m.n; ++a) out << std::setw(9) << m.counts[static_cast<std::size_t>(p)][static_cast<std::size_t>(a)];
    out << std::setw(11) << m.precision(p) << "\n";
  }
  out << std::setw(12) << "Recall";
  for (int a = 0; a < m.n; ++a) out << std::setw(9) << m.recall(a);
  out << "\n";
  return out.str();
}

std::string sweep_to_csv(SweepAxis axis, std::span<const SweepPoint> points) {
  std::ostringstream out;
  out << sweep_axis_name(axis) << ",mean_accuracy,fold_plan\n";
  for (const auto& p : points) out << p.value << ',' << format_double(p.report.mean_accuracy) << ',' << p.report.plan_digest << '\n';
  return out.str();
}

std::string records_to_csv(std::span<const WindowRecord> records) {
  std::ostringstream out;
  out << "row,fold,truth,top1,top2,final\n";
  for (const auto& r : records)
    out << r.row << ',' << r.fold << ',' << mode_name(mode_from_index(r.truth)) << ','
        << mode_name(mode_from_index(r.top1)) << ',' << mode_name(mode_from_index(r.top2)) << ','
        << mode_name(mode_from_index(r.final_mode)) << '\n';
  return out.str();
}

}  // namespace tmr
