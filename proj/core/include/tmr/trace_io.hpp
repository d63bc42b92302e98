#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "tmr/datagen.hpp"

namespace tmr {

/// File name for a trace: "trace_<mode>_<segment>.csv".
std::string trace_file_name(const SensorTrace& trace);

/// CSV with header `timestamp,sensor,axis,value`, channels in sensor/axis
/// order, samples in time order.
std::string trace_to_csv(const SensorTrace& trace);
/// Parses CSV text; mode and segment come from the caller (file name).
SensorTrace trace_from_csv(std::string_view csv, Mode mode, int segment, std::string_view source);

void write_trace(const std::filesystem::path& path, const SensorTrace& trace);
/// Reads a trace file, taking mode and segment from its name.
SensorTrace read_trace(const std::filesystem::path& path);

/// Writes every trace plus `manifest.json` ({files, modes, seed, config}).
void write_trace_set(const std::filesystem::path& dir, const std::vector<SensorTrace>& traces,
                     std::uint64_t seed, const nlohmann::json& config);
/// Loads the traces listed in `dir/manifest.json`, in manifest order.
std::vector<SensorTrace> read_trace_set(const std::filesystem::path& dir);

}  // namespace tmr
