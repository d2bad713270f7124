#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ado/learner.hpp"
#include "ado/mixture.hpp"
#include "ado/policy.hpp"
#include "ado/scaling_law.hpp"

namespace ado {

enum class SamplingMode { multinomial, expected };

struct AdoConfig {
  MixtureWeights mu;          // prior over domains
  PolicyHyperparams hp;
  FitConfig fit;
  long long t_update = 1000;  // steps between refits
  long long t_warmup = 5000;
  long long batch_size = 256;
  long long total_steps = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AdoState {
  long long step = 0;     // completed training steps, warmup included
  long long n_total = 0;  // step * batch_size
  MixtureWeights h;
  MixtureWeights pi_bar;
  MixtureWeights last_pi;
  std::vector<FitResult> laws;
  std::vector<LearningCurve> loss_buffers;
  Rng rng{0};
};

struct StepRecord {
  long long step = 0;
  long long n_total = 0;
  bool warmup = false;
  MixtureWeights pi, rho, h, pi_bar;
  std::vector<std::optional<double>> losses;
  // Laws fitted at the end of this step, empty when no refit happened.
  std::vector<FitResult> refit;
  std::vector<std::string> refit_warnings;
};

struct RunLog {
  std::size_t num_domains = 0;
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;

  // One JSON object per line; schema in docs/formats.md.
  std::string to_jsonl() const;
};

// Algorithm: train on the prior for t_warmup steps, fit one law per
// domain, then per step compute rho/pi, train, update h and pi_bar, and
// refit every t_update steps (on the step counter that includes warmup).
AdoState warmup(Learner& learner, const AdoConfig& config, SamplingMode mode,
                RunLog* log = nullptr);

void ado_step(AdoState& state, Learner& learner, const AdoConfig& config,
              SamplingMode mode, RunLog* log = nullptr);

RunLog run(Learner& learner, const AdoConfig& config,
           SamplingMode mode = SamplingMode::multinomial);

// Baseline mode: every step samples from `pinned`; no laws are fitted.
RunLog run_pinned(Learner& learner, const MixtureWeights& pinned,
                  const AdoConfig& config, SamplingMode mode);

}  // namespace ado
