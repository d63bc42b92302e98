#pragma once

#include <map>
#include <tuple>

#include "tmr/dataset.hpp"

namespace fixture {

// Pooled dataset from short generated traces, cached per parameter set.
inline const tmr::Dataset& small_dataset(double seconds_per_mode, std::uint64_t seed = 42, int segments = 1) {
  static std::map<std::tuple<double, std::uint64_t, int>, tmr::Dataset> cache;
  const auto key = std::make_tuple(seconds_per_mode, seed, segments);
  auto it = cache.find(key);
  if (it == cache.end()) {
    tmr::GenSpec spec;
    spec.duration_s.fill(seconds_per_mode);
    spec.seed = seed;
    spec.segments_per_mode = segments;
    const auto traces = tmr::generate_dataset(spec);
    it = cache.emplace(key, tmr::extract_dataset(traces, tmr::FeatureDomain::Pooled)).first;
  }
  return it->second;
}

}  // namespace fixture
