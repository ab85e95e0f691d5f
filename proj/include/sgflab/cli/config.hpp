#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sgflab::cli {

/// A recognised configuration key with its default ("" means no default).
struct KeySpec {
  std::string_view key;
  std::string_view default_value;
  std::string_view help;
};

const std::vector<KeySpec>& config_keys();
const KeySpec* find_key(std::string_view key);

/// Flat `key = value` configuration with dotted keys. A `[section]` line
/// prefixes the keys that follow it; `#` starts a comment.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Sorted `key = value` lines; parse(serialize()) reproduces the config.
  std::string serialize() const;

  /// Throws ConfigError for unknown keys.
  void set(std::string_view key, std::string_view value);
  void set_number(std::string_view key, double value);
  bool has(std::string_view key) const;

  /// Explicit value or the documented default.
  std::string get(std::string_view key) const;
  double get_double(std::string_view key) const;
  long long get_int(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<double> get_doubles(std::string_view key) const;
  std::vector<int> get_ints(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& entries() const noexcept { return values_; }
  bool operator==(const ExperimentConfig&) const = default;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

/// Decimal or 0x-prefixed hexadecimal 64-bit seed.
std::uint64_t parse_seed(std::string_view text, std::string_view field = "seed");

}  // namespace sgflab::cli
