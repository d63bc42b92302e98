#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"
#include "tmr/catalog.hpp"
#include "tmr/datagen.hpp"
#include "tmr/features.hpp"
#include "tmr/matrix.hpp"

namespace tmr {

/// Labeled feature matrix: one row per window.
struct Dataset {
  Matrix X;
  std::vector<int> labels;       // mode index per row
  std::vector<int> feature_ids;  // catalog id of each column
  std::vector<int> groups;       // source trace per row (for grouped folds)

  std::size_t rows() const { return X.rows(); }
  std::size_t cols() const { return X.cols(); }

  /// Keeps only the columns of a feature domain; throws when the matrix
  /// lacks any of them.
  Dataset restrict(FeatureDomain domain) const;
  Dataset select_rows(std::span<const std::size_t> rows) const;
  /// Column positions of catalog ids; throws for ids not present.
  std::vector<std::size_t> columns_of(std::span<const int> ids) const;
  /// Row count per mode.
  std::array<std::size_t, kModeCount> mode_counts() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Windows every trace and extracts the requested feature domain.
Dataset extract_dataset(std::span<const SensorTrace> traces, FeatureDomain domain,
                        const FeatureOptions& options = {});

/// CSV: header `mode,<feature names...>`, one row per window.
std::string dataset_to_csv(const Dataset& ds);
Dataset dataset_from_csv(std::string_view csv, std::string_view source);

/// Writes `path` (CSV) and `path.meta.json` (fingerprint, row groups).
void write_dataset(const std::filesystem::path& path, const Dataset& ds, const nlohmann::json& fingerprint);
Dataset read_dataset(const std::filesystem::path& path);

}  // namespace tmr
