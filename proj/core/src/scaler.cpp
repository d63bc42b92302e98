#include "tmr/scaler.hpp"

#include <algorithm>

#include "tmr/error.hpp"

namespace tmr {

Scaler fit_scaler(const Matrix& training) {
  if (training.rows() == 0 || training.cols() == 0) throw InvalidArgument("fit_scaler: empty training matrix");
  Scaler s;
  auto first = training.row(0);
  s.min.assign(first.begin(), first.end());
  s.max.assign(first.begin(), first.end());
  for (std::size_t r = 1; r < training.rows(); ++r) {
    auto row = training.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      s.min[c] = std::min(s.min[c], row[c]);
      s.max[c] = std::max(s.max[c], row[c]);
    }
  }
  return s;
}

void apply_scaler_inplace(const Scaler& scaler, std::span<double> values) {
  if (values.size() != scaler.size()) throw InvalidArgument("apply_scaler: width mismatch");
  for (std::size_t c = 0; c < values.size(); ++c) {
    const double lo = scaler.min[c];
    const double hi = scaler.max[c];
    if (!(hi > lo)) {
      values[c] = 0.0;
      continue;
    }
    values[c] = std::clamp(2.0 * (values[c] - lo) / (hi - lo) - 1.0, -1.0, 1.0);
  }
}

std::vector<double> apply_scaler(const Scaler& scaler, std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  apply_scaler_inplace(scaler, out);
  return out;
}

Matrix apply_scaler(const Scaler& scaler, const Matrix& m) {
  Matrix out = m;
  for (std::size_t r = 0; r < out.rows(); ++r) apply_scaler_inplace(scaler, out.row(r));
  return out;
}

nlohmann::json to_json(const Scaler& s) { return {{"min", s.min}, {"max", s.max}}; }

Scaler scaler_from_json(const nlohmann::json& j) {
  Scaler s;
  s.min = j.at("min").get<std::vector<double>>();
  s.max = j.at("max").get<std::vector<double>>();
  if (s.min.size() != s.max.size()) throw FormatError("scaler: min/max length mismatch");
  return s;
}

}  // namespace tmr
