#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tmr/signal.hpp"

namespace tmr {

enum class FeatureDomain { Time, Freq, Pooled };

std::string_view domain_name(FeatureDomain d);  // "time", "freq", "pooled"
FeatureDomain parse_domain(std::string_view s);

/// The 18 time-domain measures, in table order: 10 on the samples, then 8
/// on the first derivative.
enum class Measure : int {
  Mean, Max, Min, Variance, StdDev, Range, Iqr, SignChange, Energy, SpectralEntropy,
  DMean, DMax, DMin, DVariance, DStdDev, DRange, DIqr, DSignChange,
};
inline constexpr int kMeasureCount = 18;

std::string_view measure_name(Measure m);  // "mean", ..., "d_sign_change"

inline constexpr int kTimeFeatureCount = 165;
inline constexpr int kFreqComponents = 20;
inline constexpr int kFreqFeatureCount = kAxisChannelCount * kFreqComponents;  // 180
inline constexpr int kFeatureCount = kTimeFeatureCount + kFreqFeatureCount;    // 345

struct FeatureDescriptor {
  int id = 0;
  bool is_time = true;
  Channel channel = Channel::AccelX;
  Measure measure = Measure::Mean;  // time features only
  int component = 0;                // freq features only: rank of the component
  std::string name;                 // "t_accel_x_mean", "f_gyro_z_c07"
};

/// Immutable catalog of the 345 pooled features. Time features take ids
/// 0..164 grouped by channel; frequency features take 165..344.
class FeatureCatalog {
public:
  static const FeatureCatalog& standard();

  std::size_t size() const { return descriptors_.size(); }
  const FeatureDescriptor& operator[](int id) const { return descriptors_.at(static_cast<std::size_t>(id)); }
  std::span<const FeatureDescriptor> all() const { return descriptors_; }

  /// Ascending ids belonging to a domain (165, 180 or 345 of them).
  std::vector<int> ids(FeatureDomain domain) const;
  std::optional<int> find(std::string_view name) const;

  /// Measures applied to one channel (empty for channels outside the plan).
  std::span<const Measure> plan(Channel c) const;

private:
  FeatureCatalog();
  std::vector<FeatureDescriptor> descriptors_;
};

}  // namespace tmr
