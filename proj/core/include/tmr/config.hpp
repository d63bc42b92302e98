#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tmr/datagen.hpp"
#include "tmr/eval.hpp"
#include "tmr/features.hpp"

namespace tmr {

/// Flat key = value settings with typed validation. Every key has a
/// default; unknown keys are rejected.
class RunConfig {
public:
  RunConfig();

  /// Lines `key = value`; `#` starts a comment. Throws FormatError naming
  /// the file and line.
  void load_file(const std::filesystem::path& path);
  void load_text(std::string_view text, std::string_view source);
  /// Accepts `key=value`.
  void set_assignment(std::string_view assignment);
  void set(std::string_view key, std::string_view value);

  const std::string& get(std::string_view key) const;
  long long get_int(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;

  /// Every key with its value, sorted by key.
  nlohmann::json fingerprint() const;

  GenSpec gen_spec() const;
  FeatureOptions feature_options() const;
  FeatureDomain domain() const;
  EvalSettings eval_settings() const;

  static const std::map<std::string, std::string, std::less<>>& defaults();

private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace tmr
