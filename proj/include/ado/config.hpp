#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ado {

// Plain-text key = value configuration. '#' starts a comment; keys are
// unique; values are scalars or whitespace-separated lists.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text,
                                     const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double dflt) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long dflt) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::uint64_t> get_u64s(const std::string& key) const;

  const std::string& origin() const { return origin_; }
  const std::string& raw_text() const { return raw_; }

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
  std::string raw_;
};

}  // namespace ado
