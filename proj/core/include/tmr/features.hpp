#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "tmr/catalog.hpp"
#include "tmr/signal.hpp"

namespace tmr {

/// Which 20 spectral components become features.
enum class FreqComponents {
  Highest,    // the 20 largest non-DC magnitudes, sorted descending
  FirstBins,  // magnitudes of bins 1..20 in bin order
};

struct FeatureOptions {
  FreqComponents freq = FreqComponents::Highest;
  SumMode sum_mode = SumMode::Algebraic;
};

/// Feature values tagged with their catalog ids.
struct PartialFeatures {
  std::vector<int> ids;
  std::vector<double> values;
};

struct FeatureVector {
  Mode mode = Mode::Bike;
  std::vector<int> ids;  // ascending catalog ids
  std::vector<double> values;
};

/// The 165 time-domain features of a window.
PartialFeatures time_features(const Window& window);
/// The 180 frequency-domain features of a window.
PartialFeatures freq_features(const Window& window, FreqComponents mode = FreqComponents::Highest);

/// Concatenates parts in catalog order. The union must be exactly the time
/// ids, the frequency ids, or all 345; collisions or gaps throw.
FeatureVector pool(Mode mode, std::span<const PartialFeatures> parts);

FeatureVector extract_features(const Window& window, FeatureDomain domain, const FeatureOptions& options = {});

/// Catalog as JSON: [{id, name, domain, channel, measure|component}].
nlohmann::json catalog_to_json(const FeatureCatalog& catalog);

}  // namespace tmr
