#pragma once

#include <cmath>
#include <vector>

#include "ado/rng.hpp"
#include "ado/scaling_law.hpp"

namespace ado::testing {

// Generates a noiseless (or log-normally noisy) curve from a known law;
// the generator doubles as the recovery oracle for fit tests.
inline LearningCurve generate_curve(const PowerLawParams& truth,
                                    std::size_t points, double n_lo,
                                    double n_hi, double sigma = 0.0,
                                    Rng* rng = nullptr) {
  LearningCurve curve;
  curve.domain_id = "generated";
  const double log_lo = std::log(n_lo);
  const double log_hi = std::log(n_hi);
  for (std::size_t i = 0; i < points; ++i) {
    const double frac =
        points == 1 ? 0.0
                    : static_cast<double>(i) / static_cast<double>(points - 1);
    const double n = std::exp(log_lo + frac * (log_hi - log_lo));
    double loss = predict_loss(truth, n);
    if (sigma > 0.0 && rng) loss *= std::exp(sigma * rng->normal());
    if (curve.points.empty() || n > curve.points.back().n)
      curve.points.push_back({n, loss});
  }
  return curve;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace ado::testing
