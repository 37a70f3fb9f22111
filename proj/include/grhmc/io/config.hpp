#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grhmc/common.hpp"

namespace grhmc::io {

/// Parse failure with source location; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  int line = 0;
  int column = 0;
  ConfigError(const std::string& what, int line_, int column_ = 0)
      : std::runtime_error(what + " (line " + std::to_string(line_) +
                           (column_ > 0 ? ", column " + std::to_string(column_) : "") + ")"),
        line(line_),
        column(column_) {}
};

/// Sectioned key=value text: `[section]` headers, `key = value` entries,
/// `#` comments. Values keep their raw text; typed accessors parse on demand.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long get_long(const std::string& section, const std::string& key) const;
  long get_long_or(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const;

  /// Reject any key outside the allowed set of its section.
  void validate_keys(
      const std::map<std::string, std::vector<std::string>>& allowed) const;

  const std::vector<std::string>& sections() const { return section_order_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> data_;
  std::vector<std::string> section_order_;
  std::string origin_;
};

}  // namespace grhmc::io
