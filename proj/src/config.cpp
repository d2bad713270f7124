#include "ado/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ado/error.hpp"

namespace ado {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text,
                                            const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  cfg.raw_ = text;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::parse, origin + ":" + std::to_string(lineno) +
                                        ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw Error(ErrorCode::parse,
                  origin + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key))
      throw Error(ErrorCode::parse, origin + ":" + std::to_string(lineno) +
                                        ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) > 0;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw Error(ErrorCode::config,
                origin_ + ": missing required key '" + key + "'");
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& dflt) const {
  auto it = values_.find(key);
  return it == values_.end() ? dflt : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw Error(ErrorCode::config,
                origin_ + ": key '" + key + "' is not a number: " + s);
  return v;
}

double KeyValueConfig::get_double(const std::string& key, double dflt) const {
  return has(key) ? get_double(key) : dflt;
}

long long KeyValueConfig::get_int(const std::string& key) const {
  const std::string s = get_string(key);
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw Error(ErrorCode::config,
                origin_ + ": key '" + key + "' is not an integer: " + s);
  return v;
}

long long KeyValueConfig::get_int(const std::string& key,
                                  long long dflt) const {
  return has(key) ? get_int(key) : dflt;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::uint64_t dflt) const {
  if (!has(key)) return dflt;
  const std::string s = get_string(key);
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw Error(ErrorCode::config,
                origin_ + ": key '" + key + "' is not an integer: " + s);
  return v;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw Error(ErrorCode::config, origin_ + ": key '" + key +
                                         "' has a non-numeric entry: " + tok);
    out.push_back(v);
  }
  if (out.empty())
    throw Error(ErrorCode::config,
                origin_ + ": key '" + key + "' has an empty list");
  return out;
}

std::vector<std::uint64_t> KeyValueConfig::get_u64s(
    const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<std::uint64_t> out;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
      throw Error(ErrorCode::config, origin_ + ": key '" + key +
                                         "' has a non-integer entry: " + tok);
    out.push_back(v);
  }
  if (out.empty())
    throw Error(ErrorCode::config,
                origin_ + ": key '" + key + "' has an empty list");
  return out;
}

}  // namespace ado
