#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace affect::io {

// Shortest representation that round-trips the exact double value.
// All delimited outputs use this so files are byte-stable across runs.
std::string format_double(double value);

// Empty string for missing values in delimited outputs.
std::string format_optional(const std::optional<double>& value);

std::vector<std::string> split(std::string_view line, char delimiter);
std::string_view trim(std::string_view s);

// Parses `key = value` lines; '#' starts a comment; repeated keys accumulate.
// Used by the collection, seed and generator config formats.
struct KeyValueFile {
  std::map<std::string, std::vector<std::string>> entries;

  static KeyValueFile load(const std::string& path);
  static KeyValueFile parse(std::string_view text);

  bool has(const std::string& key) const;
  // Last occurrence wins for scalar lookups.
  std::string get(const std::string& key) const;                      // throws ConfigError if absent
  std::string get_or(const std::string& key, std::string def) const;
  const std::vector<std::string>& all(const std::string& key) const;  // empty if absent
};

double parse_double(std::string_view s);  // throws ConfigError on junk
std::int64_t parse_int(std::string_view s);

// ISO-8601 calendar date ("2018-04-07") to UTC midnight epoch seconds.
std::int64_t parse_iso_date(std::string_view s);

// Epoch seconds (a UTC midnight) back to "YYYY-MM-DD".
std::string format_iso_date(std::int64_t epoch_seconds);

std::string read_file(const std::string& path);          // throws IoError
void write_file(const std::string& path, std::string_view content);

std::string join_csv(std::span<const std::string> fields);

}  // namespace affect::io
