#include "tmr/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "tmr/error.hpp"
#include "tmr/fileio.hpp"
#include "tmr/parallel.hpp"
#include "tmr/rng.hpp"

namespace tmr {

std::string_view framework_name(Framework f) {
  return f == Framework::Traditional ? "traditional" : "hierarchical";
}

Framework parse_framework(std::string_view s) {
  if (s == "traditional") return Framework::Traditional;
  if (s == "hierarchical") return Framework::Hierarchical;
  throw FormatError("unknown framework '" + std::string(s) + "' (expected traditional or hierarchical)");
}

ProbabilityVector TaskModel::predict(std::span<const double> input) const {
  std::vector<double> x(columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) x[k] = input[columns[k]];
  apply_scaler_inplace(scaler, x);
  return tmr::predict(classifier, x);
}

TaskModel train_task_model(const Dataset& ds, std::span<const std::size_t> rows, const TaskId& task,
                           Algorithm algorithm, const TrainSettings& settings, std::uint64_t seed) {
  std::vector<std::size_t> task_rows;
  std::vector<int> y;
  for (std::size_t r : rows)
    if (task.contains(ds.labels[r])) {
      task_rows.push_back(r);
      y.push_back(ds.labels[r]);
    }
  const Matrix X = ds.X.select_rows(task_rows);
  const std::string name = task_name(task);

  const auto ranking = rank_features(X, y, ds.feature_ids, task, settings.rank_trees,
                                     derive_seed(seed, "select/" + name, 0));
  TaskModel model;
  model.subset = select_top_k(ranking, settings.select_k);
  model.columns = ds.columns_of(model.subset.ids);
  Matrix Xs = X.select_columns(model.columns);
  model.scaler = fit_scaler(Xs);
  Xs = apply_scaler(model.scaler, Xs);
  model.classifier = train_classifier(algorithm, Xs, y, settings.params, derive_seed(seed, "train/" + name, 0));
  return model;
}

HierarchicalModel train_hierarchy(const Dataset& ds, const TrainSettings& settings, std::span<const std::size_t> rows) {
  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(ds.rows());
    for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
    rows = all;
  }
  std::array<std::size_t, kModeCount> counts{};
  for (std::size_t r : rows) ++counts[static_cast<std::size_t>(ds.labels[r])];
  std::string missing;
  for (int m = 0; m < kModeCount; ++m)
    if (counts[static_cast<std::size_t>(m)] == 0) missing += (missing.empty() ? "" : ", ") + std::string(mode_name(mode_from_index(m)));
  if (!missing.empty()) throw InvalidArgument("training data has no rows of mode " + missing);
  const double expected = static_cast<double>(rows.size()) / kModeCount;
  for (std::size_t m = 0; m < counts.size(); ++m)
    if (std::abs(static_cast<double>(counts[m]) - expected) > 0.05 * expected) {
      std::clog << "warning: training data is imbalanced (" << mode_name(mode_from_index(static_cast<int>(m)))
                << " has " << counts[m] << " rows); class balance constant kept at " << settings.c << "\n";
      break;
    }

  HierarchicalModel model;
  model.framework = settings.framework;
  model.input_ids = ds.feature_ids;
  model.c = settings.c;
  const auto tasks = all_tasks();
  const std::size_t n_tasks = settings.framework == Framework::Hierarchical ? tasks.size() : 1;
  std::vector<TaskModel> trained(n_tasks);
  parallel_for(n_tasks, [&](std::size_t t) {
    const Algorithm alg = t == 0 ? settings.first_layer : settings.second_layer;
    trained[t] = train_task_model(ds, rows, tasks[t], alg, settings, settings.seed);
  });
  model.first = std::move(trained[0]);
  for (std::size_t t = 1; t < n_tasks; ++t) model.pairs.push_back(std::move(trained[t]));
  return model;
}

Fusion fuse(double p_i, double p_j, double q_i, double q_j, int i, int j) {
  Fusion f;
  const double a = p_i * q_i;
  const double b = p_j * q_j;
  const double total = a + b;
  if (total > 0.0) {
    f.posterior = {a / total, b / total};
  } else {
    // both candidates vetoed; fall back on the first layer
    const double s = p_i + p_j;
    f.posterior = s > 0.0 ? std::array<double, 2>{p_i / s, p_j / s} : std::array<double, 2>{1.0, 0.0};
  }
  f.winner = f.posterior[1] > f.posterior[0] ? j : i;
  return f;
}

std::pair<int, int> top_two(std::span<const double> p) {
  if (p.size() < 2) throw InvalidArgument("top_two: need at least two entries");
  int i = 0;
  for (int k = 1; k < static_cast<int>(p.size()); ++k)
    if (p[static_cast<std::size_t>(k)] > p[static_cast<std::size_t>(i)]) i = k;
  int j = i == 0 ? 1 : 0;
  for (int k = 0; k < static_cast<int>(p.size()); ++k)
    if (k != i && p[static_cast<std::size_t>(k)] > p[static_cast<std::size_t>(j)]) j = k;
  return {i, j};
}

LayerOutcome classify(const HierarchicalModel& model, std::span<const double> input) {
  if (input.size() != model.input_ids.size())
    throw InvalidArgument("classify: expected " + std::to_string(model.input_ids.size()) + " input features");
  LayerOutcome out;
  out.first = model.first.predict(input);
  std::vector<double> p(kModeCount, 0.0);
  for (int m = 0; m < kModeCount; ++m) p[static_cast<std::size_t>(m)] = out.first.of(m);
  std::tie(out.i, out.j) = top_two(p);
  out.final_mode = out.i;
  if (model.framework == Framework::Traditional) return out;

  const ModePair pair = make_pair(mode_from_index(out.i), mode_from_index(out.j));
  const TaskModel& pm = model.pairs.at(static_cast<std::size_t>(pair_index(pair)));
  out.second = pm.predict(input);
  const Fusion f = fuse(p[static_cast<std::size_t>(out.i)], p[static_cast<std::size_t>(out.j)], out.second->of(out.i),
                        out.second->of(out.j), out.i, out.j);
  out.fused = f.posterior;
  out.final_mode = f.winner;
  return out;
}

namespace {

constexpr int kBundleVersion = 1;

std::filesystem::path model_file(const TaskId& task) { return task_name(task) + ".model.json"; }
std::filesystem::path subset_file(const TaskId& task) { return std::filesystem::path("subsets") / (task_name(task) + ".json"); }

void write_task(const std::filesystem::path& dir, const TaskModel& m) {
  nlohmann::json j{{"task", task_name(m.subset.task)}, {"scaler", to_json(m.scaler)}, {"classifier", to_json(m.classifier)}};
  write_text_file_atomic(dir / model_file(m.subset.task), j.dump());
  write_text_file_atomic(dir / subset_file(m.subset.task), to_json(m.subset).dump(2) + "\n");
}

TaskModel read_task(const std::filesystem::path& dir, const TaskId& task, const std::vector<int>& input_ids) {
  const auto path = dir / model_file(task);
  try {
    const auto j = nlohmann::json::parse(read_text_file(path));
    TaskModel m;
    m.subset = subset_from_json(nlohmann::json::parse(read_text_file(dir / subset_file(task))));
    if (!(m.subset.task == task)) throw FormatError("subset file names task " + task_name(m.subset.task));
    m.scaler = scaler_from_json(j.at("scaler"));
    m.classifier = classifier_from_json(j.at("classifier"));
    if (m.scaler.size() != m.subset.ids.size()) throw FormatError("scaler width does not match the subset");
    for (int id : m.subset.ids) {
      auto it = std::find(input_ids.begin(), input_ids.end(), id);
      if (it == input_ids.end()) throw FormatError("subset id " + std::to_string(id) + " is not a model input");
      m.columns.push_back(static_cast<std::size_t>(it - input_ids.begin()));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace

void write_bundle(const std::filesystem::path& dir, const HierarchicalModel& model, const nlohmann::json& fingerprint) {
  std::filesystem::create_directories(dir / "subsets");
  write_task(dir, model.first);
  for (const auto& p : model.pairs) write_task(dir, p);
  nlohmann::json tasks = nlohmann::json::array();
  tasks.push_back(task_name(model.first.subset.task));
  for (const auto& p : model.pairs) tasks.push_back(task_name(p.subset.task));
  const nlohmann::json manifest{{"format", "tmr-model-bundle"},
                                {"version", kBundleVersion},
                                {"framework", std::string(framework_name(model.framework))},
                                {"c", model.c},
                                {"input_ids", model.input_ids},
                                {"tasks", tasks},
                                {"config", fingerprint}};
  write_text_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

nlohmann::json read_bundle_fingerprint(const std::filesystem::path& dir) {
  try {
    return nlohmann::json::parse(read_text_file(dir / "manifest.json")).at("config");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError((dir / "manifest.json").string() + ": " + e.what());
  }
}

HierarchicalModel read_bundle(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  HierarchicalModel model;
  try {
    const auto m = nlohmann::json::parse(read_text_file(manifest_path));
    if (m.at("format").get<std::string>() != "tmr-model-bundle") throw FormatError("not a model bundle manifest");
    if (m.at("version").get<int>() != kBundleVersion) throw FormatError("unsupported bundle version");
    model.framework = parse_framework(m.at("framework").get<std::string>());
    model.c = m.at("c").get<double>();
    model.input_ids = m.at("input_ids").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(manifest_path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(manifest_path.string() + ": " + e.what());
  }
  model.first = read_task(dir, TaskId::all_modes(), model.input_ids);
  if (model.framework == Framework::Hierarchical)
    for (const auto& p : all_mode_pairs()) model.pairs.push_back(read_task(dir, TaskId::for_pair(p), model.input_ids));
  return model;
}

}  // namespace tmr
