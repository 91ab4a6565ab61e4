#include "vnom/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vnom {

namespace {

std::string_view trim_ws(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace

IniConfig IniConfig::parse(std::string_view text, std::string_view source) {
  IniConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto fail_here = [&](const std::string& msg) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": " + msg);
    };
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim_ws(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_here("unterminated section header");
      section = std::string(trim_ws(line.substr(1, line.size() - 2)));
      if (!valid_name(section)) fail_here("invalid section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail_here("expected key = value");
    const auto key = trim_ws(line.substr(0, eq));
    if (!valid_name(key)) fail_here("invalid key");
    if (section.empty()) fail_here("key outside of any section");
    const std::string full = section + "." + std::string(key);
    if (cfg.entries_.count(full)) fail_here("duplicate key " + full);
    cfg.entries_[full] = Entry{std::string(trim_ws(line.substr(eq + 1))), std::string(source), line_no};
  }
  return cfg;
}

IniConfig IniConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void IniConfig::set(std::string_view assignment, std::string_view source) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError(std::string(source) + ": expected section.key=value");
  const auto key = trim_ws(assignment.substr(0, eq));
  if (key.find('.') == std::string_view::npos || !valid_name(key))
    throw ConfigError(std::string(source) + ": expected section.key=value, got " + std::string(assignment));
  set(std::string(key), std::string(trim_ws(assignment.substr(eq + 1))), source);
}

void IniConfig::set(const std::string& key, std::string value, std::string_view source) {
  entries_[key] = Entry{std::move(value), std::string(source), 0};
}

std::string IniConfig::where(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return key;
  if (it->second.line == 0) return it->second.source + " (" + key + ")";
  return it->second.source + ":" + std::to_string(it->second.line);
}

void IniConfig::fail(const std::string& key, const std::string& message) const {
  throw ConfigError(where(key) + ": " + key + ": " + message);
}

std::string IniConfig::get_string(const std::string& key, std::optional<std::string> fallback) const {
  const auto it = entries_.find(key);
  if (it != entries_.end()) return it->second.value;
  if (fallback) return *fallback;
  throw ConfigError("missing required key " + key);
}

double IniConfig::get_double(const std::string& key, std::optional<double> fallback) const {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key " + key);
  }
  const std::string& v = entries_.at(key).value;
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
    fail(key, "expected a number, got '" + v + "'");
  return out;
}

std::int64_t IniConfig::get_int(const std::string& key, std::optional<std::int64_t> fallback) const {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key " + key);
  }
  const std::string& v = entries_.at(key).value;
  std::int64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) fail(key, "expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t IniConfig::get_uint(const std::string& key, std::optional<std::uint64_t> fallback) const {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key " + key);
  }
  const std::string& v = entries_.at(key).value;
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    fail(key, "expected a nonnegative integer, got '" + v + "'");
  return out;
}

bool IniConfig::get_bool(const std::string& key, std::optional<bool> fallback) const {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key " + key);
  }
  const std::string& v = entries_.at(key).value;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(key, "expected true or false, got '" + v + "'");
}

std::vector<double> IniConfig::get_doubles(const std::string& key, std::optional<std::vector<double>> fallback) const {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key " + key);
  }
  const std::string& v = entries_.at(key).value;
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const auto comma = v.find(',', pos);
    const auto tok = trim_ws(std::string_view(v).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    pos = comma == std::string::npos ? v.size() + 1 : comma + 1;
    if (tok.empty()) {
      if (v.empty()) break;
      fail(key, "empty list element");
    }
    double x = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) fail(key, "expected a number list, got '" + v + "'");
    out.push_back(x);
  }
  return out;
}

void IniConfig::require_known(const std::vector<std::string>& known) const {
  for (const auto& [key, entry] : entries_)
    if (std::find(known.begin(), known.end(), key) == known.end()) fail(key, "unknown key");
}

std::string IniConfig::to_text() const {
  std::string out, section;
  for (const auto& [key, entry] : entries_) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += '\n';
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + entry.value + "\n";
  }
  return out;
}

}  // namespace vnom
