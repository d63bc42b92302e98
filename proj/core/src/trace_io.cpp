#include "tmr/trace_io.hpp"

#include <sstream>

#include "tmr/error.hpp"
#include "tmr/fileio.hpp"

namespace tmr {

std::string trace_file_name(const SensorTrace& trace) {
  return "trace_" + std::string(mode_name(trace.mode)) + "_" + std::to_string(trace.segment) + ".csv";
}

std::string trace_to_csv(const SensorTrace& trace) {
  std::string out = "timestamp,sensor,axis,value\n";
  for (int c = 0; c < kAxisChannelCount; ++c) {
    const std::string prefix = "," + std::string(sensor_name(static_cast<Sensor>(c / 3))) + "," +
                               std::string(axis_name(static_cast<Axis>(c % 3))) + ",";
    for (const Sample& s : trace.channels[static_cast<std::size_t>(c)]) {
      out += format_double(s.t);
      out += prefix;
      out += format_double(s.v);
      out += '\n';
    }
  }
  return out;
}

SensorTrace trace_from_csv(std::string_view csv, Mode mode, int segment, std::string_view source) {
  SensorTrace trace;
  trace.mode = mode;
  trace.segment = segment;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  const std::string src(source);
  while (pos < csv.size()) {
    auto end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv(line);
    if (line_no == 1) {
      if (fields.size() != 4 || fields[0] != "timestamp" || fields[1] != "sensor" ||
          fields[2] != "axis" || fields[3] != "value")
        throw FormatError(src + ": expected header 'timestamp,sensor,axis,value'");
      continue;
    }
    const std::string ctx = src + ":" + std::to_string(line_no);
    if (fields.size() != 4) throw FormatError(ctx + ": expected 4 fields");
    Sensor sensor = Sensor::Accel;
    Axis axis = Axis::X;
    try {
      sensor = parse_sensor(fields[1]);
      axis = parse_axis(fields[2]);
    } catch (const FormatError& e) {
      throw FormatError(ctx + ": " + e.what());
    }
    trace.channel(sensor, axis).push_back(
        {parse_double(fields[0], ctx + " timestamp"), parse_double(fields[3], ctx + " value")});
  }
  if (line_no == 0) throw FormatError(src + ": empty trace file");
  try {
    trace.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(src + ": " + e.what());
  }
  return trace;
}

void write_trace(const std::filesystem::path& path, const SensorTrace& trace) {
  write_text_file_atomic(path, trace_to_csv(trace));
}

SensorTrace read_trace(const std::filesystem::path& path) {
  // trace_<mode>_<segment>.csv
  const std::string stem = path.stem().string();
  const auto first = stem.find('_');
  const auto last = stem.rfind('_');
  if (stem.rfind("trace_", 0) != 0 || first == last)
    throw FormatError(path.string() + ": file name does not encode a mode (trace_<mode>_<n>.csv)");
  const Mode mode = parse_mode(stem.substr(first + 1, last - first - 1));
  const auto segment = static_cast<int>(parse_int(stem.substr(last + 1), path.string() + " segment"));
  return trace_from_csv(read_text_file(path), mode, segment, path.string());
}

void write_trace_set(const std::filesystem::path& dir, const std::vector<SensorTrace>& traces,
                     std::uint64_t seed, const nlohmann::json& config) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["format"] = "tmr-traces";
  manifest["version"] = 1;
  manifest["seed"] = seed;
  manifest["config"] = config;
  manifest["files"] = nlohmann::json::array();
  for (const auto& t : traces) {
    const std::string name = trace_file_name(t);
    write_trace(dir / name, t);
    manifest["files"].push_back({{"file", name}, {"mode", mode_name(t.mode)}, {"segment", t.segment}});
  }
  write_text_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<SensorTrace> read_trace_set(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_text_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(manifest_path.string() + ": " + e.what());
  }
  if (!manifest.contains("files") || !manifest["files"].is_array())
    throw FormatError(manifest_path.string() + ": missing 'files' list");
  std::vector<SensorTrace> traces;
  for (const auto& entry : manifest["files"]) {
    auto trace = read_trace(dir / entry.at("file").get<std::string>());
    if (entry.contains("mode") && parse_mode(entry["mode"].get<std::string>()) != trace.mode)
      throw FormatError(manifest_path.string() + ": mode of '" + entry["file"].get<std::string>() +
                        "' disagrees with its file name");
    traces.push_back(std::move(trace));
  }
  return traces;
}

}  // namespace tmr
