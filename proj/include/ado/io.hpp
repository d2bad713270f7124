#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ado/scaling_law.hpp"

namespace ado {

// Learning-curve CSV: header `step,n,domain,loss`, one row per
// (step, domain) observation. step is the 1-based global training step.
struct CurveTable {
  std::vector<std::string> domain_order;  // first-appearance order
  std::map<std::string, LearningCurve> curves;
  double step_size = 0.0;  // samples per step, n/step of the first row
};

CurveTable read_curves_csv(const std::string& path);

// FNV-1a 64-bit, used to stamp outputs with a config fingerprint.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Round-trip double formatting (shortest form via %.17g fallback chain).
std::string format_double(double v);

}  // namespace ado
