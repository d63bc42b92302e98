#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tmr/modes.hpp"

namespace tmr {

enum class Sensor : int { Accel = 0, Gyro = 1, Rotvec = 2 };
enum class Axis : int { X = 0, Y = 1, Z = 2 };

inline constexpr int kAxisChannelCount = 9;

constexpr int axis_channel_index(Sensor s, Axis a) {
  return static_cast<int>(s) * 3 + static_cast<int>(a);
}
std::string_view sensor_name(Sensor s);  // "accel", "gyro", "rotvec"
std::string_view axis_name(Axis a);      // "x", "y", "z"
Sensor parse_sensor(std::string_view s);
Axis parse_axis(std::string_view s);

struct Sample {
  double t;  // seconds
  double v;  // sensor units
};

/// One labeled recording: 9 raw channels, each with its own timestamps.
struct SensorTrace {
  Mode mode = Mode::Bike;
  int segment = 0;  // index of this trace among the traces of its mode
  std::array<std::vector<Sample>, kAxisChannelCount> channels;

  std::vector<Sample>& channel(Sensor s, Axis a) { return channels[axis_channel_index(s, a)]; }
  const std::vector<Sample>& channel(Sensor s, Axis a) const {
    return channels[axis_channel_index(s, a)];
  }

  /// Throws InvalidArgument unless every channel has >= 2 samples with
  /// strictly increasing timestamps.
  void validate() const;

  friend bool operator==(const SensorTrace& a, const SensorTrace& b);
};

/// Generator parameters.
struct GenSpec {
  std::array<double, kModeCount> duration_s{1800.0, 1800.0, 1800.0, 1800.0, 1800.0};
  double base_rate_hz = 25.0;
  double jitter = 0.1;  // fraction of the nominal sample interval
  double noise = 1.0;   // scales additive noise and parameter wander; 0 gives clean tones
  std::uint64_t seed = 42;
  int segments_per_mode = 1;  // each mode's duration is split across this many traces

  void validate() const;
};

/// Documented per-mode signal signature of the accelerometer x axis.
struct ModeSignature {
  double freq_hz;        // dominant oscillation
  double amplitude;      // of the dominant oscillation
  double offset;         // sustained bias, in units of amplitude (vehicle modes)
  double vibration_hz;   // engine vibration, 0 when absent
  double vibration_amp;
  double modulation_hz;  // stop-and-go amplitude modulation, 0 when absent
  double modulation_depth;
  int dominant_bin;      // argmax DFT bin of a clean 1-s, 100 Hz accel-x window
};

const ModeSignature& mode_signature(Mode m);

/// Generates one trace. `stream` selects an independent random stream for
/// the same (mode, seed), used for multi-segment datasets.
SensorTrace generate_trace(Mode mode, double duration_s, const GenSpec& spec,
                           std::uint64_t stream = 0);

/// Balanced dataset: segments_per_mode traces per mode, in mode order.
std::vector<SensorTrace> generate_dataset(const GenSpec& spec);

}  // namespace tmr
