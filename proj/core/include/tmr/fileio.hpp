#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tmr {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);
/// Strict parse of a whole field; throws FormatError naming `context`.
double parse_double(std::string_view text, std::string_view context);
long long parse_int(std::string_view text, std::string_view context);

/// Splits one CSV line on commas (no quoting; none of our formats need it).
std::vector<std::string_view> split_csv(std::string_view line);

std::string read_text_file(const std::filesystem::path& path);
/// Writes via a temporary sibling file and rename, so readers never observe
/// a partially written artifact.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace tmr
