#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <string_view>

#include "mrc/error.hpp"
#include "mrc/timing.hpp"

namespace mrc {

/// Flat `key = value` file. `#` starts a comment; blank lines are ignored.
/// Keys are kept in sorted order so the resolved configuration prints stably.
using KeyValues = std::map<std::string, std::string, std::less<>>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

inline KeyValues read_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ParameterError("line " + std::to_string(lineno), "expected key = value");
    const auto key = std::string(detail::trim(view.substr(0, eq)));
    const auto value = std::string(detail::trim(view.substr(eq + 1)));
    if (key.empty()) throw ParameterError("line " + std::to_string(lineno), "empty key");
    if (!out.emplace(key, value).second) throw ParameterError(key, "duplicate key");
  }
  return out;
}

inline KeyValues read_key_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("config", "cannot open '" + path + "'");
  return read_key_values(in);
}

inline double parse_double(std::string_view field, std::string_view text) {
  double v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ParameterError(std::string(field), "not a number: '" + std::string(text) + "'");
  return v;
}

inline bool is_phy_param_key(std::string_view key) {
  for (const auto& f : detail::kParamFields)
    if (f.name == key) return true;
  return false;
}

/// Overlays `kv` onto `base`. Every key must be a PhyMacParams field name.
inline PhyMacParams apply_phy_params(const KeyValues& kv, PhyMacParams base = {}) {
  for (const auto& [key, value] : kv) {
    bool found = false;
    for (const auto& f : detail::kParamFields) {
      if (f.name == key) {
        base.*(f.member) = parse_double(key, value);
        found = true;
        break;
      }
    }
    if (!found) throw ParameterError(key, "unknown configuration key");
  }
  validate(base);
  return base;
}

inline PhyMacParams load_phy_params(std::istream& in) { return apply_phy_params(read_key_values(in)); }

/// Renders params in the same key = value syntax the loader accepts.
inline KeyValues to_key_values(const PhyMacParams& p) {
  KeyValues out;
  for (const auto& f : detail::kParamFields) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p.*(f.member));
    out.emplace(std::string(f.name), std::string(buf, ptr));
  }
  return out;
}

}  // namespace mrc
