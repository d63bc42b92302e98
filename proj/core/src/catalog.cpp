#include "tmr/catalog.hpp"

#include <cstdio>

#include "tmr/error.hpp"

namespace tmr {

namespace {

using M = Measure;

constexpr std::array<Measure, 18> kAllMeasures{
    M::Mean, M::Max, M::Min, M::Variance, M::StdDev, M::Range, M::Iqr, M::SignChange, M::Energy,
    M::SpectralEntropy, M::DMean, M::DMax, M::DMin, M::DVariance, M::DStdDev, M::DRange, M::DIqr,
    M::DSignChange};

// The source lists only how many measures reach the rotation-vector and
// summation channels (7, 16 and 4); these subsets realise those counts.
constexpr std::array<Measure, 7> kRotvecAxisMeasures{M::Mean, M::Max,   M::Min, M::Variance,
                                                     M::StdDev, M::Range, M::Iqr};
constexpr std::array<Measure, 16> kSumMeasures{
    M::Mean, M::Max, M::Min, M::Variance, M::StdDev, M::Range, M::Iqr, M::SignChange,
    M::DMean, M::DMax, M::DMin, M::DVariance, M::DStdDev, M::DRange, M::DIqr, M::DSignChange};
constexpr std::array<Measure, 4> kRotvecSumMeasures{M::Mean, M::Variance, M::Range, M::SignChange};

}  // namespace

std::string_view domain_name(FeatureDomain d) {
  switch (d) {
    case FeatureDomain::Time: return "time";
    case FeatureDomain::Freq: return "freq";
    case FeatureDomain::Pooled: return "pooled";
  }
  return "?";
}

FeatureDomain parse_domain(std::string_view s) {
  if (s == "time") return FeatureDomain::Time;
  if (s == "freq") return FeatureDomain::Freq;
  if (s == "pooled") return FeatureDomain::Pooled;
  throw FormatError("unknown feature domain '" + std::string(s) + "' (time|freq|pooled)");
}

std::string_view measure_name(Measure m) {
  static constexpr std::array<std::string_view, kMeasureCount> names{
      "mean",   "max",     "min",        "variance", "std",   "range",     "iqr",
      "sign_change", "energy", "spectral_entropy", "d_mean", "d_max", "d_min", "d_variance",
      "d_std",  "d_range", "d_iqr",      "d_sign_change"};
  return names[static_cast<std::size_t>(m)];
}

std::span<const Measure> FeatureCatalog::plan(Channel c) const {
  switch (c) {
    case Channel::AccelX: case Channel::AccelY: case Channel::AccelZ:
    case Channel::GyroX: case Channel::GyroY: case Channel::GyroZ:
      return kAllMeasures;
    case Channel::RotvecX: case Channel::RotvecY: case Channel::RotvecZ:
      return kRotvecAxisMeasures;
    case Channel::AccelSum: case Channel::GyroSum:
      return kSumMeasures;
    case Channel::RotvecSum:
      return kRotvecSumMeasures;
  }
  return {};
}

FeatureCatalog::FeatureCatalog() {
  for (int c = 0; c < kChannelCount; ++c) {
    const auto channel = static_cast<Channel>(c);
    for (Measure m : plan(channel)) {
      FeatureDescriptor d;
      d.id = static_cast<int>(descriptors_.size());
      d.is_time = true;
      d.channel = channel;
      d.measure = m;
      d.name = "t_" + std::string(channel_name(channel)) + "_" + std::string(measure_name(m));
      descriptors_.push_back(std::move(d));
    }
  }
  for (int c = 0; c < kAxisChannelCount; ++c) {
    const auto channel = static_cast<Channel>(c);
    for (int k = 0; k < kFreqComponents; ++k) {
      FeatureDescriptor d;
      d.id = static_cast<int>(descriptors_.size());
      d.is_time = false;
      d.channel = channel;
      d.component = k;
      char buf[8];
      std::snprintf(buf, sizeof buf, "c%02d", k);
      d.name = "f_" + std::string(channel_name(channel)) + "_" + buf;
      descriptors_.push_back(std::move(d));
    }
  }
}

const FeatureCatalog& FeatureCatalog::standard() {
  static const FeatureCatalog catalog;
  return catalog;
}

std::vector<int> FeatureCatalog::ids(FeatureDomain domain) const {
  std::vector<int> out;
  for (const auto& d : descriptors_) {
    if (domain == FeatureDomain::Pooled || (domain == FeatureDomain::Time) == d.is_time) out.push_back(d.id);
  }
  return out;
}

std::optional<int> FeatureCatalog::find(std::string_view name) const {
  for (const auto& d : descriptors_)
    if (d.name == name) return d.id;
  return std::nullopt;
}

}  // namespace tmr
