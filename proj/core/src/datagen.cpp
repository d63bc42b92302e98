#include "tmr/datagen.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tmr/error.hpp"
#include "tmr/rng.hpp"

namespace tmr {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

// Walk/run/bike oscillate around zero; the vehicle modes sway slowly on top
// of a sustained bias, so their 1-s windows are dominated by the DC bin.
constexpr std::array<ModeSignature, kModeCount> kSignatures{{
    // f     A     bias  vib   vib_a  am    am_depth  bin
    {1.2, 0.8, 0.0, 0.0, 0.0, 0.0, 0.0, 1},     // bike
    {0.3, 0.3, 1.5, 15.0, 0.1, 0.0, 0.0, 0},    // car
    {2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2},     // walk
    {3.0, 2.5, 0.0, 0.0, 0.0, 0.0, 0.0, 3},     // run
    {0.2, 0.4, 1.5, 15.0, 0.1, 0.05, 0.3, 0},   // bus
}};

struct ChannelShape {
  double scale;         // relative to the dominant amplitude
  double phase;         // radians
  double harmonic;      // weight of the second harmonic
  double noise_scale;   // additive noise std per unit of GenSpec::noise
  bool carries_bias;
  bool carries_vibration;
};

// accel x/y/z, gyro x/y/z, rotvec x/y/z
constexpr std::array<ChannelShape, kAxisChannelCount> kShapes{{
    {1.00, 0.0, 0.00, 0.20, true, true},
    {0.60, 1.1, 0.25, 0.20, false, true},
    {0.80, 2.3, 0.10, 0.20, false, true},
    {0.50, 0.7, 0.00, 0.10, false, false},
    {0.40, 1.9, 0.15, 0.10, false, false},
    {0.30, 2.9, 0.00, 0.10, false, false},
    {0.10, 0.4, 0.00, 0.02, true, false},
    {0.08, 1.6, 0.00, 0.02, true, false},
    {0.06, 2.6, 0.00, 0.02, true, false},
}};

// Ornstein-Uhlenbeck wander with unit stationary variance.
class Wander {
public:
  Wander(Rng& rng, double tau_s) : rng_(rng), tau_(tau_s) { value_ = normal_(rng_); }
  double step(double dt) {
    const double decay = std::exp(-dt / tau_);
    value_ = value_ * decay + std::sqrt(1.0 - decay * decay) * normal_(rng_);
    return value_;
  }

private:
  Rng& rng_;
  double tau_;
  double value_ = 0.0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

std::string_view sensor_name(Sensor s) {
  switch (s) {
    case Sensor::Accel: return "accel";
    case Sensor::Gyro: return "gyro";
    case Sensor::Rotvec: return "rotvec";
  }
  return "?";
}

std::string_view axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

Sensor parse_sensor(std::string_view s) {
  if (s == "accel") return Sensor::Accel;
  if (s == "gyro") return Sensor::Gyro;
  if (s == "rotvec") return Sensor::Rotvec;
  throw FormatError("unknown sensor '" + std::string(s) + "'");
}

Axis parse_axis(std::string_view s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  throw FormatError("unknown axis '" + std::string(s) + "'");
}

void SensorTrace::validate() const {
  for (int c = 0; c < kAxisChannelCount; ++c) {
    const auto& ch = channels[static_cast<std::size_t>(c)];
    const std::string label = std::string(sensor_name(static_cast<Sensor>(c / 3))) + "_" +
                              std::string(axis_name(static_cast<Axis>(c % 3)));
    if (ch.size() < 2)
      throw InvalidArgument("channel " + label + " has fewer than 2 samples");
    for (std::size_t k = 1; k < ch.size(); ++k)
      if (!(ch[k].t > ch[k - 1].t))
        throw InvalidArgument("channel " + label + ": timestamps not strictly increasing at sample " +
                              std::to_string(k));
  }
}

bool operator==(const SensorTrace& a, const SensorTrace& b) {
  if (a.mode != b.mode || a.segment != b.segment) return false;
  for (std::size_t c = 0; c < a.channels.size(); ++c) {
    const auto& x = a.channels[c];
    const auto& y = b.channels[c];
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k].t != y[k].t || x[k].v != y[k].v) return false;
  }
  return true;
}

void GenSpec::validate() const {
  for (int m = 0; m < kModeCount; ++m)
    if (!(duration_s[static_cast<std::size_t>(m)] > 0.0))
      throw InvalidArgument("GenSpec: duration for mode '" + std::string(mode_name(mode_from_index(m))) +
                            "' must be positive");
  if (!(base_rate_hz >= 1.0 && base_rate_hz <= 100.0))
    throw InvalidArgument("GenSpec: base rate must lie in [1, 100] Hz");
  if (!(jitter >= 0.0 && jitter < 0.5)) throw InvalidArgument("GenSpec: jitter must lie in [0, 0.5)");
  if (!(noise >= 0.0)) throw InvalidArgument("GenSpec: noise level must be non-negative");
  if (segments_per_mode < 1) throw InvalidArgument("GenSpec: segments_per_mode must be >= 1");
}

const ModeSignature& mode_signature(Mode m) { return kSignatures[static_cast<std::size_t>(mode_index(m))]; }

SensorTrace generate_trace(Mode mode, double duration_s, const GenSpec& spec, std::uint64_t stream) {
  if (!(duration_s > 0.0)) throw InvalidArgument("generate_trace: duration must be positive");
  GenSpec checked = spec;
  checked.duration_s.fill(duration_s);
  checked.validate();

  const ModeSignature& sig = mode_signature(mode);
  const double h = 1.0 / spec.base_rate_hz;
  // One nominal interval of padding on both sides keeps [0, duration] inside
  // the common span of all channels after jitter.
  const auto n = static_cast<std::size_t>(std::floor(duration_s / h + 1e-9)) + 3;

  SensorTrace trace;
  trace.mode = mode;
  trace.segment = static_cast<int>(stream);

  Rng shared(derive_seed(spec.seed, "datagen/shared", static_cast<std::uint64_t>(mode_index(mode)) * 1000003ULL + stream));
  const double phase0 = std::uniform_real_distribution<double>(0.0, kTau)(shared);
  const double am_phase = std::uniform_real_distribution<double>(0.0, kTau)(shared);
  const double wander = spec.noise;

  for (int c = 0; c < kAxisChannelCount; ++c) {
    const ChannelShape& shape = kShapes[static_cast<std::size_t>(c)];
    Rng rng(derive_seed(spec.seed, "datagen/channel",
                        (static_cast<std::uint64_t>(mode_index(mode)) * 1000003ULL + stream) * 16 +
                            static_cast<std::uint64_t>(c)));
    // Amplitude and frequency wander share one stream per trace (they are
    // properties of the motion, not of a sensor), drawn in lockstep with
    // the channel's own jitter and noise streams.
    Rng motion(derive_seed(spec.seed, "datagen/motion",
                           static_cast<std::uint64_t>(mode_index(mode)) * 1000003ULL + stream));
    Wander amp_walk(motion, 8.0);
    Wander freq_walk(motion, 5.0);
    std::uniform_real_distribution<double> jit(-spec.jitter, spec.jitter);
    std::normal_distribution<double> noise(0.0, shape.noise_scale * spec.noise);

    auto& out = trace.channels[static_cast<std::size_t>(c)];
    out.resize(n);
    double phase = phase0;
    double prev_t = -h;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = (static_cast<double>(k) - 1.0) * h + jit(rng) * h;
      const double dt = k == 0 ? 0.0 : t - prev_t;
      prev_t = t;
      const double a_w = std::exp(0.12 * wander * amp_walk.step(std::max(dt, 1e-6)));
      const double f_w = 1.0 + 0.08 * wander * freq_walk.step(std::max(dt, 1e-6));
      phase += kTau * sig.freq_hz * f_w * dt;

      double amp = sig.amplitude * a_w;
      if (sig.modulation_hz > 0.0)
        amp *= 1.0 - sig.modulation_depth +
               sig.modulation_depth * std::sin(kTau * sig.modulation_hz * t + am_phase);

      double v = amp * shape.scale *
                 (std::sin(phase + shape.phase) + shape.harmonic * std::sin(2.0 * phase + shape.phase));
      if (shape.carries_bias) v += amp * shape.scale * sig.offset;
      if (shape.carries_vibration && sig.vibration_hz > 0.0)
        v += sig.vibration_amp * shape.scale * std::sin(kTau * sig.vibration_hz * t + shape.phase);
      if (spec.noise > 0.0) v += noise(rng);
      out[k] = {t, v};
    }
  }
  return trace;
}

std::vector<SensorTrace> generate_dataset(const GenSpec& spec) {
  spec.validate();
  std::vector<SensorTrace> traces;
  for (Mode m : kAllModes) {
    const double per_segment = spec.duration_s[static_cast<std::size_t>(mode_index(m))] /
                               static_cast<double>(spec.segments_per_mode);
    for (int s = 0; s < spec.segments_per_mode; ++s)
      traces.push_back(generate_trace(m, per_segment, spec, static_cast<std::uint64_t>(s)));
  }
  return traces;
}

}  // namespace tmr
