#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace ado {

// Deterministic random source. All distribution transforms are implemented
// here instead of <random>'s distribution classes, whose output is
// implementation-defined; this keeps seeded runs reproducible across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller. One value per call.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Index in [0, k) proportional to weights (need not be normalized).
  std::size_t categorical(const std::vector<double>& weights) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double u = uniform() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cum += weights[i];
      if (u < cum) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

// Multinomial draw: `trials` independent categorical samples, tallied.
std::vector<long long> multinomial_counts(const std::vector<double>& probs,
                                          long long trials, Rng& rng);

// Deterministic rounding of probs*trials to integer counts summing to
// trials (largest remainder, ties to the lower index).
std::vector<long long> expected_counts(const std::vector<double>& probs,
                                       long long trials);

// First `m` entries of a seeded partial Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                    std::size_t m, Rng& rng);

}  // namespace ado
