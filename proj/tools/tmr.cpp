// tmr: command line front end for the transportation mode pipeline.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tmr/benefit.hpp"
#include "tmr/config.hpp"
#include "tmr/dataset.hpp"
#include "tmr/error.hpp"
#include "tmr/eval.hpp"
#include "tmr/fileio.hpp"
#include "tmr/hierarchy.hpp"
#include "tmr/parallel.hpp"
#include "tmr/rng.hpp"
#include "tmr/selection.hpp"
#include "tmr/trace_io.hpp"

namespace fs = std::filesystem;
using namespace tmr;

namespace {

enum Exit { kOk = 0, kUsage = 2, kInput = 3, kCompute = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string domain;
  int threads = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_domain) {
  cmd->add_option("--config", c.config_path, "key = value configuration file");
  cmd->add_option("--set", c.overrides, "override one configuration key (key=value)");
  cmd->add_option("--threads", c.threads, "worker threads (default: TMR_THREADS or all cores)")->check(CLI::PositiveNumber);
  if (with_domain) cmd->add_option("--domain", c.domain, "feature domain: time, freq or pooled");
}

RunConfig load_config(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) cfg.load_file(c.config_path);
  for (const auto& o : c.overrides) {
    try {
      cfg.set_assignment(o);
    } catch (const FormatError& e) {
      throw UsageError(std::string("--set: ") + e.what());
    }
  }
  if (!c.domain.empty()) {
    try {
      cfg.set("domain", c.domain);
    } catch (const FormatError& e) {
      throw UsageError(std::string("--domain: ") + e.what());
    }
  }
  if (c.threads > 0) set_thread_count(static_cast<std::size_t>(c.threads));
  return cfg;
}

// Reads a feature matrix and keeps the configured domain.
Dataset load_features(const fs::path& path, FeatureDomain domain) {
  Dataset ds = read_dataset(path);
  try {
    return ds.restrict(domain);
  } catch (const InvalidArgument& e) {
    throw FormatError(path.string() + ": matrix lacks the " + std::string(domain_name(domain)) + " features (" +
                      e.what() + ")");
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text_file_atomic(path, j.dump(2) + "\n"); }

int cmd_generate(const Common& c, const std::string& out) {
  const RunConfig cfg = load_config(c);
  const auto traces = generate_dataset(cfg.gen_spec());
  write_trace_set(out, traces, cfg.gen_spec().seed, cfg.fingerprint());
  std::cout << "wrote " << traces.size() << " traces to " << out << "\n";
  return kOk;
}

int cmd_extract(const Common& c, const std::string& traces_dir, const std::string& out) {
  const RunConfig cfg = load_config(c);
  const auto traces = read_trace_set(traces_dir);
  const Dataset ds = extract_dataset(traces, cfg.domain(), cfg.feature_options());
  write_dataset(out, ds, cfg.fingerprint());
  std::cout << "wrote " << ds.rows() << " windows x " << ds.cols() << " features to " << out << "\n";
  return kOk;
}

int cmd_select(const Common& c, const std::string& features, const std::string& out) {
  const RunConfig cfg = load_config(c);
  const Dataset ds = load_features(features, cfg.domain());
  const EvalSettings s = cfg.eval_settings();
  std::vector<ImportanceRanking> rankings;
  const fs::path dir(out);
  fs::create_directories(dir / "subsets");
  nlohmann::json index = nlohmann::json::object();
  for (const auto& task : all_tasks()) {
    const auto rows = task_rows(ds.labels, task);
    std::vector<int> y;
    for (auto r : rows) y.push_back(ds.labels[r]);
    const std::string name = task_name(task);
    rankings.push_back(rank_features(ds.X.select_rows(rows), y, ds.feature_ids, task, s.train.rank_trees,
                                     derive_seed(s.train.seed, "select/" + name, 0)));
    const FeatureSubset subset = select_top_k(rankings.back(), s.train.select_k);
    write_json(dir / "subsets" / (name + ".json"), to_json(subset));
    index[name] = subset.ids;
  }
  write_text_file_atomic(dir / "ranking.csv", ranking_to_csv(rankings));
  write_json(dir / "subsets.json", {{"config", cfg.fingerprint()}, {"subsets", index}});
  std::cout << "wrote rankings and subsets for " << rankings.size() << " tasks to " << out << "\n";
  return kOk;
}

int cmd_train(const Common& c, const std::string& features, const std::string& out) {
  const RunConfig cfg = load_config(c);
  const Dataset ds = load_features(features, cfg.domain());
  const HierarchicalModel model = train_hierarchy(ds, cfg.eval_settings().train);
  write_bundle(out, model, cfg.fingerprint());
  std::cout << "wrote " << framework_name(model.framework) << " model bundle to " << out << "\n";
  return kOk;
}

int cmd_evaluate(const Common& c, const std::string& features, const std::string& out, const std::string& records) {
  const RunConfig cfg = load_config(c);
  const Dataset ds = load_features(features, cfg.domain());
  const CvReport report = cross_validate(ds, cfg.eval_settings(), cfg.fingerprint());
  const fs::path dir(out);
  fs::create_directories(dir);
  write_json(dir / "report.json", to_json(report));
  write_text_file_atomic(dir / "report.txt", report_table(report));
  if (!records.empty()) write_text_file_atomic(records, records_to_csv(report.records));
  std::cout << report_table(report);
  return kOk;
}

int cmd_sweep(const Common& c, const std::string& features, const std::string& axis_name,
              const std::vector<int>& values_in, const std::string& out) {
  const RunConfig cfg = load_config(c);
  SweepAxis axis;
  try {
    axis = parse_sweep_axis(axis_name);
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  }
  const Dataset ds = load_features(features, cfg.domain());
  const auto values = values_in.empty() ? sweep_values(axis) : values_in;
  const auto points = sweep(ds, axis, values, cfg.eval_settings(), cfg.fingerprint());
  const fs::path dir(out);
  fs::create_directories(dir);
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& p : points) reports.push_back(to_json(p.report));
  write_json(dir / "sweep.json", {{"axis", std::string(sweep_axis_name(axis))}, {"reports", reports}});
  write_text_file_atomic(dir / "sweep.csv", sweep_to_csv(axis, points));
  std::cout << sweep_to_csv(axis, points);
  return kOk;
}

int cmd_benefit(const Common& c, const std::string& model_dir, const std::string& features, const std::string& out) {
  const RunConfig cfg = load_config(c);
  const HierarchicalModel model = read_bundle(model_dir);
  Dataset ds = read_dataset(features);
  try {
    ds = ds.restrict(parse_domain(read_bundle_fingerprint(model_dir).at("domain").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(model_dir + "/manifest.json: " + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(features + ": " + e.what());
  }
  const auto outcomes = collect_outcomes(model, ds);
  const BenefitEstimate est =
      estimate_benefit(outcomes, cfg.get_double("beta_a"), cfg.get_double("beta_b"), model.c);
  nlohmann::json j = to_json(est);
  j["config"] = cfg.fingerprint();
  write_json(out, j);
  std::cout << j.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transportation mode recognition pipeline"};
  app.require_subcommand(1);
  Common common;
  std::string out, traces_dir = "traces", features, records, axis, model_dir;
  std::vector<int> values;

  auto* gen = app.add_subcommand("generate", "synthesise sensor traces");
  add_common(gen, common, false);
  gen->add_option("--out", out, "output directory")->required();

  auto* ext = app.add_subcommand("extract", "traces to a feature matrix");
  add_common(ext, common, true);
  ext->add_option("--traces", traces_dir, "trace directory")->required();
  ext->add_option("--out", out, "output CSV")->required();

  auto* sel = app.add_subcommand("select", "feature rankings and subsets per task");
  add_common(sel, common, true);
  sel->add_option("--features", features, "feature matrix CSV")->required();
  sel->add_option("--out", out, "output directory")->required();

  auto* trn = app.add_subcommand("train", "train a model bundle");
  add_common(trn, common, true);
  trn->add_option("--features", features, "feature matrix CSV")->required();
  trn->add_option("--out", out, "bundle directory")->required();

  auto* evl = app.add_subcommand("evaluate", "k-fold cross-validation report");
  add_common(evl, common, true);
  evl->add_option("--features", features, "feature matrix CSV")->required();
  evl->add_option("--out", out, "report directory")->required();
  evl->add_option("--records", records, "optional per-window CSV");

  auto* swp = app.add_subcommand("sweep", "cross-validate over a hyperparameter axis");
  add_common(swp, common, true);
  swp->add_option("--features", features, "feature matrix CSV")->required();
  swp->add_option("--axis", axis, "knn_k, cart_pruning or rf_trees")->required();
  swp->add_option("--values", values, "axis values (default: the full range)")->delimiter(',');
  swp->add_option("--out", out, "output directory")->required();

  auto* ben = app.add_subcommand("benefit", "two-layer benefit estimate on validation data");
  add_common(ben, common, false);
  ben->add_option("--model", model_dir, "model bundle directory")->required();
  ben->add_option("--features", features, "validation feature matrix CSV")->required();
  ben->add_option("--out", out, "output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_generate(common, out);
    if (*ext) return cmd_extract(common, traces_dir, out);
    if (*sel) return cmd_select(common, features, out);
    if (*trn) return cmd_train(common, features, out);
    if (*evl) return cmd_evaluate(common, features, out, records);
    if (*swp) return cmd_sweep(common, features, axis, values, out);
    if (*ben) return cmd_benefit(common, model_dir, features, out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return kCompute;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  }
  return kUsage;
}
