#pragma once

/**
 * Reader for the flat TOML subset used by sweep spec files:
 *   [table]            one level of tables
 *   key = value        number, "string", true/false, or an array
 *   # comment
 * Keys are stored as "table.key" (bare "key" before the first table).
 */

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "fracineq/error.hpp"

namespace fracineq::toml_lite {

using Scalar = std::variant<double, std::string, bool>;
using Value = std::variant<double, std::string, bool, std::vector<Scalar>>;
using Document = std::map<std::string, Value>;

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] inline void parse_fail(int line, const std::string& what) {
  fail(ErrorKind::parse_error, "line " + std::to_string(line) + ": " + what);
}

/// Drops a trailing comment that is not inside a string.
inline std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

inline Scalar parse_scalar(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s.empty()) parse_fail(line, "missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') parse_fail(line, "unterminated string");
    return s.substr(1, s.size() - 2);
  }
  if (s == "true") return true;
  if (s == "false") return false;
  std::string digits;
  for (char c : s) {
    if (c != '_') digits.push_back(c);
  }
  char* end = nullptr;
  const double v = std::strtod(digits.c_str(), &end);
  if (end == digits.c_str() || *end != '\0') parse_fail(line, "cannot parse value '" + s + "'");
  return v;
}

inline std::vector<std::string> split_array(const std::string& body, int line) {
  std::vector<std::string> items;
  std::string cur;
  bool in_str = false;
  for (char c : body) {
    if (c == '"') in_str = !in_str;
    if (c == ',' && !in_str) {
      items.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (in_str) parse_fail(line, "unterminated string in array");
  if (!trim(cur).empty()) items.push_back(cur);
  return items;
}

}  // namespace detail

inline Document parse(std::istream& in) {
  Document doc;
  std::string table;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = detail::trim(detail::strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) detail::parse_fail(line, "malformed table header");
      table = detail::trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) detail::parse_fail(line, "expected key = value");
    const std::string key = detail::trim(s.substr(0, eq));
    std::string val = detail::trim(s.substr(eq + 1));
    if (key.empty()) detail::parse_fail(line, "empty key");
    const int start = line;
    while (!val.empty() && val.front() == '[' && val.back() != ']') {
      if (!std::getline(in, raw)) detail::parse_fail(start, "unterminated array");
      ++line;
      val += " " + detail::trim(detail::strip_comment(raw));
      val = detail::trim(val);
    }
    const std::string full = table.empty() ? key : table + "." + key;
    if (doc.count(full)) detail::parse_fail(line, "duplicate key '" + full + "'");
    if (!val.empty() && val.front() == '[') {
      std::vector<Scalar> items;
      for (const auto& item : detail::split_array(val.substr(1, val.size() - 2), line)) {
        items.push_back(detail::parse_scalar(item, line));
      }
      doc[full] = std::move(items);
    } else {
      std::visit([&](auto&& v) { doc[full] = v; }, detail::parse_scalar(val, line));
    }
  }
  return doc;
}

inline Document parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

inline Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_config, "cannot open spec file '" + path + "'");
  return parse(in);
}

}  // namespace fracineq::toml_lite
