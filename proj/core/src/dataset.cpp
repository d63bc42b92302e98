#include "tmr/dataset.hpp"

#include <algorithm>
#include <unordered_map>

#include "tmr/error.hpp"
#include "tmr/fileio.hpp"
#include "tmr/parallel.hpp"

namespace tmr {

Dataset Dataset::restrict(FeatureDomain domain) const {
  const auto ids = FeatureCatalog::standard().ids(domain);
  const auto cols = columns_of(ids);
  Dataset out;
  out.X = X.select_columns(cols);
  out.labels = labels;
  out.feature_ids = ids;
  out.groups = groups;
  return out;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  Dataset out;
  out.X = X.select_rows(rows);
  out.feature_ids = feature_ids;
  out.labels.reserve(rows.size());
  for (auto r : rows) out.labels.push_back(labels[r]);
  if (!groups.empty()) {
    out.groups.reserve(rows.size());
    for (auto r : rows) out.groups.push_back(groups[r]);
  }
  return out;
}

std::vector<std::size_t> Dataset::columns_of(std::span<const int> ids) const {
  std::unordered_map<int, std::size_t> position;
  for (std::size_t c = 0; c < feature_ids.size(); ++c) position.emplace(feature_ids[c], c);
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (int id : ids) {
    auto it = position.find(id);
    if (it == position.end())
      throw InvalidArgument("feature '" + FeatureCatalog::standard()[id].name + "' is not in the matrix");
    out.push_back(it->second);
  }
  return out;
}

std::array<std::size_t, kModeCount> Dataset::mode_counts() const {
  std::array<std::size_t, kModeCount> counts{};
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

Dataset extract_dataset(std::span<const SensorTrace> traces, FeatureDomain domain, const FeatureOptions& options) {
  std::vector<Window> windows;
  std::vector<int> groups;
  for (std::size_t t = 0; t < traces.size(); ++t) {
    auto w = trace_windows(traces[t], options.sum_mode);
    groups.insert(groups.end(), w.size(), static_cast<int>(t));
    windows.insert(windows.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
  }

  Dataset ds;
  ds.feature_ids = FeatureCatalog::standard().ids(domain);
  ds.X = Matrix(windows.size(), ds.feature_ids.size());
  ds.labels.resize(windows.size());
  ds.groups = std::move(groups);
  parallel_for(windows.size(), [&](std::size_t i) {
    const auto fv = extract_features(windows[i], domain, options);
    std::copy(fv.values.begin(), fv.values.end(), ds.X.row(i).begin());
    ds.labels[i] = mode_index(windows[i].mode);
  });
  return ds;
}

std::string dataset_to_csv(const Dataset& ds) {
  const auto& catalog = FeatureCatalog::standard();
  std::string out = "mode";
  for (int id : ds.feature_ids) {
    out += ',';
    out += catalog[id].name;
  }
  out += '\n';
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    out += mode_name(mode_from_index(ds.labels[r]));
    for (double v : ds.X.row(r)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

Dataset dataset_from_csv(std::string_view csv, std::string_view source) {
  const auto& catalog = FeatureCatalog::standard();
  const std::string src(source);
  Dataset ds;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::vector<double> row;
  while (pos < csv.size()) {
    auto end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    const std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (line_no == 1) {
      if (fields.empty() || fields[0] != "mode") throw FormatError(src + ": first column must be 'mode'");
      for (std::size_t c = 1; c < fields.size(); ++c) {
        auto id = catalog.find(fields[c]);
        if (!id) throw FormatError(src + ": unknown feature column '" + std::string(fields[c]) + "'");
        ds.feature_ids.push_back(*id);
      }
      ds.X = Matrix(0, ds.feature_ids.size());
      continue;
    }
    const std::string ctx = src + ":" + std::to_string(line_no);
    if (fields.size() != ds.feature_ids.size() + 1)
      throw FormatError(ctx + ": expected " + std::to_string(ds.feature_ids.size() + 1) + " fields, got " +
                        std::to_string(fields.size()));
    try {
      ds.labels.push_back(mode_index(parse_mode(fields[0])));
    } catch (const FormatError& e) {
      throw FormatError(ctx + ": " + e.what());
    }
    row.resize(ds.feature_ids.size());
    for (std::size_t c = 1; c < fields.size(); ++c)
      row[c - 1] = parse_double(fields[c], ctx + " column " + std::string(catalog[ds.feature_ids[c - 1]].name));
    ds.X.append_row(row);
  }
  if (line_no == 0) throw FormatError(src + ": empty feature matrix");
  return ds;
}

void write_dataset(const std::filesystem::path& path, const Dataset& ds, const nlohmann::json& fingerprint) {
  write_text_file_atomic(path, dataset_to_csv(ds));
  nlohmann::json meta;
  meta["format"] = "tmr-feature-matrix";
  meta["version"] = 1;
  meta["rows"] = ds.rows();
  meta["columns"] = ds.cols();
  meta["config"] = fingerprint;
  // run-length encoded [group, count] pairs
  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t r = 0; r < ds.groups.size();) {
    std::size_t e = r;
    while (e < ds.groups.size() && ds.groups[e] == ds.groups[r]) ++e;
    runs.push_back({ds.groups[r], e - r});
    r = e;
  }
  meta["groups"] = runs;
  auto meta_path = path;
  meta_path += ".meta.json";
  write_text_file_atomic(meta_path, meta.dump(2) + "\n");
}

Dataset read_dataset(const std::filesystem::path& path) {
  Dataset ds = dataset_from_csv(read_text_file(path), path.string());
  auto meta_path = path;
  meta_path += ".meta.json";
  if (std::filesystem::exists(meta_path)) {
    try {
      const auto meta = nlohmann::json::parse(read_text_file(meta_path));
      for (const auto& run : meta.at("groups"))
        ds.groups.insert(ds.groups.end(), run.at(1).get<std::size_t>(), run.at(0).get<int>());
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(meta_path.string() + ": " + e.what());
    }
    if (ds.groups.size() != ds.rows())
      throw FormatError(meta_path.string() + ": group runs do not cover the matrix rows");
  }
  return ds;
}

}  // namespace tmr
