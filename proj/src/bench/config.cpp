#include "sgp/bench/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "sgp/errors.hpp"
#include "sgp/io.hpp"

namespace sgp::bench {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename F>
auto convert(const std::string& key, const std::string& value, F&& f) {
  try {
    return f(value);
  } catch (const ParseError&) {
    throw ConfigError("config key `" + key + "`: cannot parse `" + value + "`");
  }
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!c.entries_.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": key `" + key + "` repeated");
    }
  }
  return c;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse(in);
}

void Config::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    if (!allowed.count(key)) throw ConfigError("unknown config key `" + key + "`");
  }
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return convert(key, it->second, [](const std::string& v) { return parse_double(v); });
}

long long Config::get_int(const std::string& key, long long fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return convert(key, it->second, [](const std::string& v) { return parse_integer(v); });
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string& v = it->second;
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key `" + key + "`: seed must be a non-negative integer");
  }
  return out;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw ConfigError("config key `" + key + "`: expected true or false");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  const auto it = entries_.find(key);
  if (it == entries_.end()) return out;
  std::string v = it->second;
  for (char& ch : v) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream ss(v);
  std::string item;
  while (ss >> item) out.push_back(item);
  return out;
}

std::vector<int> Config::get_int_list(const std::string& key) const {
  std::vector<int> out;
  for (const auto& item : get_list(key)) {
    out.push_back(static_cast<int>(convert(key, item, [](const std::string& v) { return parse_integer(v); })));
  }
  return out;
}

}  // namespace sgp::bench
