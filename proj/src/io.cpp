#include "ado/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ado/error.hpp"

namespace ado {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double_field(const std::string& s, const std::string& where) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw Error(ErrorCode::parse, where + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

CurveTable read_curves_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open curve file: " + path);

  CurveTable table;
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(lineno);
    auto fields = split_csv_line(line);
    if (!saw_header) {
      if (fields.size() != 4 || fields[0] != "step" || fields[1] != "n" ||
          fields[2] != "domain" || fields[3] != "loss")
        throw Error(ErrorCode::parse,
                    where + ": expected header 'step,n,domain,loss'");
      saw_header = true;
      continue;
    }
    if (fields.size() != 4)
      throw Error(ErrorCode::parse, where + ": expected 4 fields, got " +
                                        std::to_string(fields.size()));
    double step = parse_double_field(fields[0], where);
    double n = parse_double_field(fields[1], where);
    const std::string& domain = fields[2];
    double loss = parse_double_field(fields[3], where);
    if (step < 1.0)
      throw Error(ErrorCode::parse, where + ": step must be >= 1");
    if (n < 1.0) throw Error(ErrorCode::parse, where + ": n must be >= 1");
    if (!(loss > 0.0))
      throw Error(ErrorCode::parse, where + ": loss must be > 0");
    if (domain.empty())
      throw Error(ErrorCode::parse, where + ": empty domain id");

    if (table.step_size == 0.0) table.step_size = n / step;
    auto [it, inserted] = table.curves.try_emplace(domain);
    if (inserted) {
      it->second.domain_id = domain;
      table.domain_order.push_back(domain);
    }
    it->second.points.push_back({n, loss});
  }
  if (!saw_header)
    throw Error(ErrorCode::parse, path + ": empty file (no header)");
  if (table.curves.empty())
    throw Error(ErrorCode::parse, path + ": no data rows");
  for (auto& [name, curve] : table.curves) curve.validate();
  return table;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write file: " + path);
  out << content;
  if (!out) throw Error(ErrorCode::io, "write failed: " + path);
}

std::string format_double(double v) {
  // Shortest representation that round-trips.
  char buf[40];
  for (int prec : {15, 16, 17}) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

}  // namespace ado
