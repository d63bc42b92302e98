#include "tmr/features.hpp"

#include <algorithm>
#include <functional>

#include "tmr/dft.hpp"
#include "tmr/error.hpp"
#include "tmr/measures.hpp"

namespace tmr {

namespace {

double apply_measure(Measure m, std::span<const double> x, std::span<const double> dx) {
  namespace ms = measures;
  switch (m) {
    case Measure::Mean: return ms::mean(x);
    case Measure::Max: return ms::max(x);
    case Measure::Min: return ms::min(x);
    case Measure::Variance: return ms::variance(x);
    case Measure::StdDev: return ms::stddev(x);
    case Measure::Range: return ms::range(x);
    case Measure::Iqr: return ms::iqr(x);
    case Measure::SignChange: return ms::sign_changes(x);
    case Measure::Energy: return ms::energy(x);
    case Measure::SpectralEntropy: return ms::spectral_entropy(x);
    case Measure::DMean: return ms::mean(dx);
    case Measure::DMax: return ms::max(dx);
    case Measure::DMin: return ms::min(dx);
    case Measure::DVariance: return ms::variance(dx);
    case Measure::DStdDev: return ms::stddev(dx);
    case Measure::DRange: return ms::range(dx);
    case Measure::DIqr: return ms::iqr(dx);
    case Measure::DSignChange: return ms::sign_changes(dx);
  }
  return 0.0;
}

}  // namespace

PartialFeatures time_features(const Window& window) {
  const auto& catalog = FeatureCatalog::standard();
  PartialFeatures out;
  out.ids.reserve(kTimeFeatureCount);
  out.values.reserve(kTimeFeatureCount);
  int id = 0;
  for (int c = 0; c < kChannelCount; ++c) {
    const auto channel = static_cast<Channel>(c);
    const auto x = window[channel];
    const auto dx = derivative(x, Window::dt);
    for (Measure m : catalog.plan(channel)) {
      out.ids.push_back(id++);
      out.values.push_back(apply_measure(m, x, dx));
    }
  }
  return out;
}

PartialFeatures freq_features(const Window& window, FreqComponents mode) {
  PartialFeatures out;
  out.ids.reserve(kFreqFeatureCount);
  out.values.reserve(kFreqFeatureCount);
  int id = kTimeFeatureCount;
  for (int c = 0; c < kAxisChannelCount; ++c) {
    auto mags = dft_magnitudes(window[static_cast<Channel>(c)]);
    std::vector<double> nondc(mags.begin() + 1, mags.end());  // 50 bins
    if (mode == FreqComponents::Highest)
      std::partial_sort(nondc.begin(), nondc.begin() + kFreqComponents, nondc.end(), std::greater<>());
    for (int k = 0; k < kFreqComponents; ++k) {
      out.ids.push_back(id++);
      out.values.push_back(nondc[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

FeatureVector pool(Mode mode, std::span<const PartialFeatures> parts) {
  std::vector<std::pair<int, double>> merged;
  for (const auto& part : parts) {
    if (part.ids.size() != part.values.size())
      throw InvalidArgument("pool: ids and values differ in length");
    for (std::size_t k = 0; k < part.ids.size(); ++k) merged.emplace_back(part.ids[k], part.values[k]);
  }
  std::stable_sort(merged.begin(), merged.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 1; k < merged.size(); ++k)
    if (merged[k].first == merged[k - 1].first)
      throw InvalidArgument("pool: feature slot " + std::to_string(merged[k].first) + " filled twice");

  FeatureVector fv;
  fv.mode = mode;
  for (const auto& [id, v] : merged) {
    fv.ids.push_back(id);
    fv.values.push_back(v);
  }
  const auto& catalog = FeatureCatalog::standard();
  for (auto domain : {FeatureDomain::Time, FeatureDomain::Freq, FeatureDomain::Pooled})
    if (fv.ids == catalog.ids(domain)) return fv;
  throw InvalidArgument("pool: parts do not cover the time, frequency or pooled slots exactly (" +
                        std::to_string(fv.ids.size()) + " slots given)");
}

FeatureVector extract_features(const Window& window, FeatureDomain domain, const FeatureOptions& options) {
  std::vector<PartialFeatures> parts;
  if (domain != FeatureDomain::Freq) parts.push_back(time_features(window));
  if (domain != FeatureDomain::Time) parts.push_back(freq_features(window, options.freq));
  return pool(window.mode, parts);
}

nlohmann::json catalog_to_json(const FeatureCatalog& catalog) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : catalog.all()) {
    nlohmann::json e{{"id", d.id},
                     {"name", d.name},
                     {"domain", d.is_time ? "time" : "freq"},
                     {"channel", channel_name(d.channel)}};
    if (d.is_time)
      e["measure"] = measure_name(d.measure);
    else
      e["component"] = d.component;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace tmr
