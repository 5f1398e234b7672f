#pragma once

#include "codim1/linalg.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace codim1 {

/// Flat, typed key-value configuration with [section] headers; keys are
/// addressed as "section.key".  CLI overrides replace parsed values.
class Config {
 public:
  static Config parse_string(const std::string& text, const std::string& source = "<string>") {
    Config cfg;
    cfg.source_ = source;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError(source + ":" + std::to_string(lineno) + ": malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
      cfg.kv_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
  }

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
  double get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : to_double(key, it->second);
  }

  long long get_int(const std::string& key) const { return to_int(key, get_string(key)); }
  long long get_int(const std::string& key, long long fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : to_int(key, it->second);
  }

  /// All keys under "section." with the prefix stripped.
  std::map<std::string, std::string> section(const std::string& name) const {
    std::map<std::string, std::string> out;
    const std::string prefix = name + ".";
    for (const auto& [k, v] : kv_)
      if (k.rfind(prefix, 0) == 0) out[k.substr(prefix.size())] = v;
    return out;
  }

  const std::map<std::string, std::string>& entries() const { return kv_; }
  const std::string& source() const { return source_; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  double to_double(const std::string& key, const std::string& value) const {
    try {
      size_t pos = 0;
      const double v = std::stod(value, &pos);
      if (pos != value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
    }
  }

  long long to_int(const std::string& key, const std::string& value) const {
    try {
      size_t pos = 0;
      const long long v = std::stoll(value, &pos);
      if (pos != value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as an integer");
    }
  }

  std::map<std::string, std::string> kv_;
  std::string source_;
};

}  // namespace codim1
