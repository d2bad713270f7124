#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ado {

// A point on the K-simplex: nonnegative weights summing to 1.
struct MixtureWeights {
  std::vector<double> w;

  MixtureWeights() = default;
  explicit MixtureWeights(std::vector<double> weights) : w(std::move(weights)) {}

  std::size_t size() const { return w.size(); }
  double operator[](std::size_t i) const { return w[i]; }

  double sum() const;
  bool on_simplex(double tol = 1e-9) const;

  static MixtureWeights uniform(std::size_t k);
};

// Divides by the sum; throws on nonpositive or non-finite total mass.
MixtureWeights normalized(std::vector<double> raw, const char* what);

// Input validation for policy operations. Accepts small accumulated
// round-off (1e-6) on the sum; rejects negative entries.
void require_simplex(const MixtureWeights& m, const char* what);
void require_same_size(const MixtureWeights& a, const MixtureWeights& b,
                       const char* what);

}  // namespace ado
