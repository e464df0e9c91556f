#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace certlearn {

/// Flat `key = value` configuration. Keys may be dotted (`decider.m`); '#'
/// starts a comment line. Serialization is sorted by key, so
/// parse(serialize(c)) == c.
class Config {
 public:
  /// Throws ConfigError naming the offending line.
  static Config parse(std::string_view text);
  static Config load(const std::string& path);
  std::string serialize() const;

  bool has(const std::string& key) const { return values_.contains(key); }
  void set(const std::string& key, std::string value);
  const std::map<std::string, std::string>& values() const { return values_; }

  /// Typed reads; a present but malformed value throws ConfigError.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list; empty items are rejected.
  std::vector<std::string> get_list(const std::string& key,
                                    const std::vector<std::string>& fallback) const;
  std::vector<std::uint64_t> get_u64_list(const std::string& key,
                                          const std::vector<std::uint64_t>& fallback) const;
  std::optional<double> find_double(const std::string& key) const;

  /// Keys not in `known`; used to reject typos.
  std::vector<std::string> unknown_keys(const std::vector<std::string>& known) const;

  friend bool operator==(const Config&, const Config&) = default;

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t parse_u64(const std::string& key, std::string_view text);
double parse_double(const std::string& key, std::string_view text);

}  // namespace certlearn
