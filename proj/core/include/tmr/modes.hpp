#pragma once

#include <array>
#include <string>
#include <string_view>

namespace tmr {

/// Transportation modes. The numeric order is fixed and doubles as the
/// tie-breaking order everywhere a lowest-index rule applies.
enum class Mode : int { Bike = 0, Car = 1, Walk = 2, Run = 3, Bus = 4 };

inline constexpr int kModeCount = 5;
inline constexpr int kModePairCount = kModeCount * (kModeCount - 1) / 2;

inline constexpr std::array<Mode, kModeCount> kAllModes{Mode::Bike, Mode::Car, Mode::Walk,
                                                        Mode::Run, Mode::Bus};

constexpr int mode_index(Mode m) { return static_cast<int>(m); }
Mode mode_from_index(int index);

/// Lower-case name ("bike", "car", ...).
std::string_view mode_name(Mode m);
/// Inverse of mode_name; accepts any letter case. Throws FormatError.
Mode parse_mode(std::string_view name);

/// Unordered pair of distinct modes, normalised so that first < second.
struct ModePair {
  Mode first;
  Mode second;

  friend bool operator==(const ModePair&, const ModePair&) = default;
};

ModePair make_pair(Mode a, Mode b);

/// The 10 pairs in lexicographic index order: (bike,car), (bike,walk), ...
const std::array<ModePair, kModePairCount>& all_mode_pairs();
int pair_index(ModePair p);
std::string pair_name(ModePair p);  // "bike-car"

}  // namespace tmr
