#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "tmr/matrix.hpp"

namespace tmr {

/// Per-feature min/max scaling to [-1, 1], learned from training rows.
struct Scaler {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t size() const { return min.size(); }
  friend bool operator==(const Scaler&, const Scaler&) = default;
};

/// Throws InvalidArgument for an empty matrix.
Scaler fit_scaler(const Matrix& training);

/// 2 (v - min) / (max - min) - 1, clamped to [-1, 1]; constant features map to 0.
std::vector<double> apply_scaler(const Scaler& scaler, std::span<const double> values);
void apply_scaler_inplace(const Scaler& scaler, std::span<double> values);
Matrix apply_scaler(const Scaler& scaler, const Matrix& m);

nlohmann::json to_json(const Scaler& s);
Scaler scaler_from_json(const nlohmann::json& j);

}  // namespace tmr
