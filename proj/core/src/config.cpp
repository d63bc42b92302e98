#include "tmr/config.hpp"

#include <algorithm>
#include <sstream>

#include "tmr/error.hpp"
#include "tmr/fileio.hpp"

namespace tmr {

namespace {

enum class Kind { Int, PositiveInt, Double, Bool, Domain, Framework, Algorithm, Freq, Sum };

struct KeySpec {
  const char* key;
  const char* value;
  Kind kind;
};

constexpr KeySpec kKeys[] = {
    {"seed", "42", Kind::Int},
    {"duration_s", "1800", Kind::Double},
    {"base_rate_hz", "25", Kind::Double},
    {"jitter", "0.1", Kind::Double},
    {"noise", "1", Kind::Double},
    {"segments_per_mode", "1", Kind::PositiveInt},
    {"domain", "pooled", Kind::Domain},
    {"freq_components", "highest", Kind::Freq},
    {"sum_mode", "algebraic", Kind::Sum},
    {"framework", "hierarchical", Kind::Framework},
    {"first_layer", "rf", Kind::Algorithm},
    {"second_layer", "svm", Kind::Algorithm},
    {"knn_k", "7", Kind::PositiveInt},
    {"cart_pruning", "6", Kind::Int},
    {"cart_min_leaf", "1", Kind::PositiveInt},
    {"rf_trees", "200", Kind::PositiveInt},
    {"rf_mtry", "0", Kind::Int},
    {"rf_bootstrap", "true", Kind::Bool},
    {"svm_c", "10", Kind::Double},
    {"svm_gamma", "0", Kind::Double},
    {"svm_tol", "0.001", Kind::Double},
    {"svm_max_passes", "10000", Kind::PositiveInt},
    {"select_k", "100", Kind::PositiveInt},
    {"rank_trees", "200", Kind::PositiveInt},
    {"folds", "10", Kind::PositiveInt},
    {"group_by_trace", "false", Kind::Bool},
    {"beta_a", "1", Kind::Double},
    {"beta_b", "1", Kind::Double},
    {"c", "0.1", Kind::Double},
};

const KeySpec* find_key(std::string_view key) {
  for (const auto& k : kKeys)
    if (key == k.key) return &k;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(std::string_view v, std::string_view context) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw FormatError(std::string(context) + ": '" + std::string(v) + "' is not a boolean");
}

void validate(const KeySpec& spec, std::string_view v) {
  const std::string context = std::string("config key ") + spec.key;
  switch (spec.kind) {
    case Kind::Int:
      if (parse_int(v, context) < 0) throw FormatError(context + " must not be negative");
      break;
    case Kind::PositiveInt:
      if (parse_int(v, context) < 1) throw FormatError(context + " must be at least 1");
      break;
    case Kind::Double: parse_double(v, context); break;
    case Kind::Bool: parse_bool(v, context); break;
    case Kind::Domain: parse_domain(v); break;
    case Kind::Framework: parse_framework(v); break;
    case Kind::Algorithm: parse_algorithm(v); break;
    case Kind::Freq:
      if (v != "highest" && v != "first_bins") throw FormatError(context + " must be highest or first_bins");
      break;
    case Kind::Sum:
      if (v != "algebraic" && v != "norm") throw FormatError(context + " must be algebraic or norm");
      break;
  }
}

}  // namespace

const std::map<std::string, std::string, std::less<>>& RunConfig::defaults() {
  static const auto table = [] {
    std::map<std::string, std::string, std::less<>> m;
    for (const auto& k : kKeys) m.emplace(k.key, k.value);
    return m;
  }();
  return table;
}

RunConfig::RunConfig() : values_(defaults()) {}

void RunConfig::load_file(const std::filesystem::path& path) { load_text(read_text_file(path), path.string()); }

void RunConfig::load_text(std::string_view text, std::string_view source) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) throw FormatError(where + ": expected key = value");
    try {
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const FormatError& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
}

void RunConfig::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw FormatError("expected key=value, got '" + std::string(assignment) + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const KeySpec* spec = find_key(key);
  if (!spec) throw FormatError("unknown config key '" + std::string(key) + "'");
  validate(*spec, value);
  values_[std::string(key)] = std::string(value);
}

const std::string& RunConfig::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("unknown config key '" + std::string(key) + "'");
  return it->second;
}

long long RunConfig::get_int(std::string_view key) const { return parse_int(get(key), key); }
double RunConfig::get_double(std::string_view key) const { return parse_double(get(key), key); }
bool RunConfig::get_bool(std::string_view key) const { return parse_bool(get(key), key); }

nlohmann::json RunConfig::fingerprint() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

GenSpec RunConfig::gen_spec() const {
  GenSpec g;
  g.duration_s.fill(get_double("duration_s"));
  g.base_rate_hz = get_double("base_rate_hz");
  g.jitter = get_double("jitter");
  g.noise = get_double("noise");
  g.seed = static_cast<std::uint64_t>(get_int("seed"));
  g.segments_per_mode = static_cast<int>(get_int("segments_per_mode"));
  g.validate();
  return g;
}

FeatureOptions RunConfig::feature_options() const {
  FeatureOptions o;
  o.freq = get("freq_components") == "highest" ? FreqComponents::Highest : FreqComponents::FirstBins;
  o.sum_mode = get("sum_mode") == "algebraic" ? SumMode::Algebraic : SumMode::Norm;
  return o;
}

FeatureDomain RunConfig::domain() const { return parse_domain(get("domain")); }

EvalSettings RunConfig::eval_settings() const {
  EvalSettings s;
  TrainSettings& t = s.train;
  t.framework = parse_framework(get("framework"));
  t.first_layer = parse_algorithm(get("first_layer"));
  t.second_layer = parse_algorithm(get("second_layer"));
  t.params.knn_k = static_cast<int>(get_int("knn_k"));
  t.params.cart_pruning = static_cast<int>(get_int("cart_pruning"));
  t.params.cart_min_leaf = static_cast<int>(get_int("cart_min_leaf"));
  t.params.rf.n_trees = static_cast<int>(get_int("rf_trees"));
  t.params.rf.mtry = static_cast<int>(get_int("rf_mtry"));
  t.params.rf.bootstrap = get_bool("rf_bootstrap");
  t.params.svm.c = get_double("svm_c");
  t.params.svm.gamma = get_double("svm_gamma");
  t.params.svm.tol = get_double("svm_tol");
  t.params.svm.max_passes = get_int("svm_max_passes");
  t.select_k = static_cast<int>(get_int("select_k"));
  t.rank_trees = static_cast<int>(get_int("rank_trees"));
  t.c = get_double("c");
  t.seed = static_cast<std::uint64_t>(get_int("seed"));
  s.domain = domain();
  s.folds = static_cast<int>(get_int("folds"));
  s.group_by_trace = get_bool("group_by_trace");
  return s;
}

}  // namespace tmr
