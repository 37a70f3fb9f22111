#include "grhmc/io/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace grhmc::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line_no,
                                             static_cast<int>(s.size()));
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", line_no, 1);
      if (!cfg.data_.count(section)) {
        cfg.data_[section] = {};
        cfg.section_order_.push_back(section);
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", line_no, 1);
    if (section.empty()) throw ConfigError("entry outside any [section]", line_no, 1);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no, 1);
    if (cfg.data_[section].count(key))
      throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line_no, 1);
    cfg.data_[section][key] = {value, line_no};
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = data_.find(section);
  return it != data_.end() && it->second.count(key);
}

std::string Config::get(const std::string& section, const std::string& key) const {
  const auto it = data_.find(section);
  if (it == data_.end() || !it->second.count(key))
    throw ConfigError("missing key '" + key + "' in [" + section + "]", 0);
  return it->second.at(key).value;
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const auto it = data_.find(section);
  if (it == data_.end() || !it->second.count(key))
    throw ConfigError("missing key '" + key + "' in [" + section + "]", 0);
  const Entry& e = it->second.at(key);
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(e.value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != e.value.size() || e.value.empty())
    throw ConfigError("key '" + key + "' in [" + section + "] is not a number: '" +
                          e.value + "'",
                      e.line);
  return v;
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_long(const std::string& section, const std::string& key) const {
  const double v = get_double(section, key);
  const long l = static_cast<long>(v);
  if (static_cast<double>(l) != v)
    throw ConfigError("key '" + key + "' in [" + section + "] is not an integer", 0);
  return l;
}

long Config::get_long_or(const std::string& section, const std::string& key,
                         long fallback) const {
  return has(section, key) ? get_long(section, key) : fallback;
}

bool Config::get_bool_or(const std::string& section, const std::string& key,
                         bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get(section, key);
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "' in [" + section + "] is not a boolean: '" + v + "'",
                    0);
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
  const std::string raw = get(section, key);
  std::vector<double> out;
  std::istringstream is(raw);
  std::string cell;
  while (std::getline(is, cell, ',')) {
    const std::string s = trim(cell);
    if (s.empty()) continue;
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size())
      throw ConfigError("key '" + key + "' in [" + section + "] has a non-numeric entry '" +
                            s + "'",
                        0);
    out.push_back(v);
  }
  if (out.empty())
    throw ConfigError("key '" + key + "' in [" + section + "] is an empty list", 0);
  return out;
}

void Config::validate_keys(
    const std::map<std::string, std::vector<std::string>>& allowed) const {
  for (const auto& [section, entries] : data_) {
    const auto it = allowed.find(section);
    if (it == allowed.end())
      throw ConfigError("unknown section [" + section + "]",
                        entries.empty() ? 0 : entries.begin()->second.line);
    for (const auto& [key, entry] : entries) {
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        throw ConfigError("unknown key '" + key + "' in [" + section + "]", entry.line);
    }
  }
}

}  // namespace grhmc::io
