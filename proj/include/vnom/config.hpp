#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vnom {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat `key = value` text with `[section]` headers and `#`/`;` comments.
// Keys are addressed as "section.key". Every entry remembers where it came
// from so that validation errors can point at the offending line.
class IniConfig {
 public:
  struct Entry {
    std::string value;
    std::string source;
    std::size_t line = 0;  // 0 for values set programmatically
  };

  static IniConfig parse(std::string_view text, std::string_view source = "<config>");
  static IniConfig load(const std::string& path);

  // `assignment` is "section.key=value".
  void set(std::string_view assignment, std::string_view source = "--set");
  void set(const std::string& key, std::string value, std::string_view source = "--set");

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const std::map<std::string, Entry>& entries() const { return entries_; }

  std::string get_string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const;
  double get_double(const std::string& key, std::optional<double> fallback = std::nullopt) const;
  std::int64_t get_int(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) const;
  std::uint64_t get_uint(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) const;
  bool get_bool(const std::string& key, std::optional<bool> fallback = std::nullopt) const;
  std::vector<double> get_doubles(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt) const;

  // "source:line: message" for a key, or just the message if unknown.
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;
  std::string where(const std::string& key) const;

  // Rejects keys outside `known`, pointing at the first unknown one.
  void require_known(const std::vector<std::string>& known) const;

  std::string to_text() const;

 private:
  std::map<std::string, Entry> entries_;
};

}  // namespace vnom
