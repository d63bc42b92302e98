#include "tmr/modes.hpp"

#include <algorithm>
#include <cctype>

#include "tmr/error.hpp"

namespace tmr {

namespace {
constexpr std::array<std::string_view, kModeCount> kNames{"bike", "car", "walk", "run", "bus"};
}

Mode mode_from_index(int index) {
  if (index < 0 || index >= kModeCount)
    throw InvalidArgument("mode index out of range: " + std::to_string(index));
  return static_cast<Mode>(index);
}

std::string_view mode_name(Mode m) { return kNames[static_cast<std::size_t>(mode_index(m))]; }

Mode parse_mode(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (int i = 0; i < kModeCount; ++i)
    if (kNames[static_cast<std::size_t>(i)] == lower) return static_cast<Mode>(i);
  throw FormatError("unknown transportation mode '" + std::string(name) + "'");
}

ModePair make_pair(Mode a, Mode b) {
  if (a == b) throw InvalidArgument("mode pair needs two distinct modes");
  return mode_index(a) < mode_index(b) ? ModePair{a, b} : ModePair{b, a};
}

const std::array<ModePair, kModePairCount>& all_mode_pairs() {
  static const auto pairs = [] {
    std::array<ModePair, kModePairCount> out{};
    std::size_t k = 0;
    for (int i = 0; i < kModeCount; ++i)
      for (int j = i + 1; j < kModeCount; ++j) out[k++] = {mode_from_index(i), mode_from_index(j)};
    return out;
  }();
  return pairs;
}

int pair_index(ModePair p) {
  const auto& pairs = all_mode_pairs();
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (pairs[k] == p) return static_cast<int>(k);
  throw InvalidArgument("not a normalised mode pair");
}

std::string pair_name(ModePair p) {
  return std::string(mode_name(p.first)) + "-" + std::string(mode_name(p.second));
}

}  // namespace tmr
