#pragma once

#include <optional>
#include <vector>

#include "ado/mixture.hpp"
#include "ado/rng.hpp"

namespace ado {

// Outcome of one training step: how many samples each domain received and
// the observed per-domain losses. A loss must be present for every domain
// with a nonzero count; losses for unsampled domains are optional.
struct StepResult {
  std::vector<long long> counts;
  std::vector<std::optional<double>> losses;
};

// Anything trainable under a sampling mixture. Implementations draw the
// batch composition from `mixture` using the supplied rng (or a
// deterministic rule) and report counts summing to batch_size.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::size_t num_domains() const = 0;
  virtual StepResult step(const MixtureWeights& mixture, long long batch_size,
                          Rng& rng) = 0;
};

}  // namespace ado
