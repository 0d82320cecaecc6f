#pragma once

#include <map>
#include <string>
#include <vector>

#include "nlt/kernel.hpp"

namespace nlt {

/// Key-value configuration text with [section] nesting and # comments:
///
///   # kernel description
///   [kernel]
///   family = cone
///   axis = 1 0 0
///
/// Keys are flattened to "section.key". Parse errors carry line numbers.
class Config {
public:
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_vector(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

private:
  std::map<std::string, std::string> values_;
  std::string origin_;

  const std::string& raw(const std::string& key) const;
};

/// Builds a kernel from a [kernel] section:
///   family = constant | cone | diffeo | plap_effective | custom_table
/// plus per-family parameters (value, s, eta, Lambda, axis, half_angle,
/// symmetrized, outside, map, amplitude, field, tau, p, table).
Kernel kernel_from_config(const Config& cfg, const std::string& section = "kernel");

} // namespace nlt
