#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace sgp::bench {

/// Plain-text `key = value` configuration. `#` starts a comment; blank lines
/// are ignored; a repeated key is an error.
class Config {
 public:
  static Config parse(std::istream& in);
  static Config from_file(const std::string& path);

  /// Throws ConfigError naming the first key not in `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Whitespace- or comma-separated integers; empty when the key is absent.
  std::vector<int> get_int_list(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace sgp::bench
