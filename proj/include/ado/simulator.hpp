#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ado/ado_loop.hpp"
#include "ado/learner.hpp"

namespace ado {

// Ground-truth dynamics of one synthetic domain:
// loss = eps + beta * (n0 + n_eff)^(-alpha).
struct SyntheticDomainSpec {
  double true_alpha = 0.0;
  double true_beta = 0.0;
  double true_eps = 0.0;
  double n0 = 100.0;  // offset pseudo-count keeping the loss finite at start

  void validate() const;
};

// T[k][j] = effective samples credited to domain k per sample drawn from
// domain j. Row diagonals must dominate.
struct TransferMatrix {
  std::vector<std::vector<double>> t;

  static TransferMatrix identity(std::size_t k);
  static TransferMatrix uniform_offdiag(std::size_t k, double offdiag);
  void validate(std::size_t k) const;
};

struct NoiseSpec {
  double sigma = 0.0;  // stddev of additive noise on log-loss
  std::uint64_t seed = 0;
};

// Multi-domain learner with power-law ground truth and cross-domain
// sample transfer. One instance per run; its n_eff state mutates per step.
class SyntheticLearner : public Learner {
 public:
  SyntheticLearner(std::vector<SyntheticDomainSpec> specs, TransferMatrix t,
                   NoiseSpec noise, SamplingMode mode);

  std::size_t num_domains() const override { return specs_.size(); }
  StepResult step(const MixtureWeights& mixture, long long batch_size,
                  Rng& rng) override;

  // Noise-free loss of domain k at the current effective sample count.
  double true_loss(std::size_t k) const;
  double n_eff(std::size_t k) const { return n_eff_[k]; }

 private:
  std::vector<SyntheticDomainSpec> specs_;
  TransferMatrix transfer_;
  NoiseSpec noise_;
  SamplingMode mode_;
  std::vector<double> n_eff_;
  Rng noise_rng_;
};

std::unique_ptr<SyntheticLearner> make_learner(
    std::vector<SyntheticDomainSpec> specs, TransferMatrix t, NoiseSpec noise,
    SamplingMode mode = SamplingMode::multinomial);

// The policy under evaluation: a fixed mixture or the adaptive loop.
struct PolicyUnderTest {
  enum class Kind { fixed, adaptive } kind = Kind::fixed;
  MixtureWeights fixed_mixture;  // used when kind == fixed
};

struct PolicyEvalResult {
  // final_losses[seed_index][domain]: noise-free loss at the final n_eff.
  std::vector<std::vector<double>> final_losses;
  std::vector<double> mean_final_losses;  // per domain, averaged over seeds
  double unweighted_mean = 0.0;
  double mu_weighted_mean = 0.0;
};

using LearnerFactory =
    std::function<std::unique_ptr<SyntheticLearner>(std::uint64_t seed)>;

PolicyEvalResult evaluate_policy(const LearnerFactory& factory,
                                 const PolicyUnderTest& policy,
                                 const AdoConfig& config,
                                 const std::vector<std::uint64_t>& seeds,
                                 SamplingMode mode);

// Plain-text scenario file: domain ground truths, transfer rows, noise,
// run geometry, policy hyperparameters. Schema in docs/formats.md.
struct Scenario {
  std::vector<SyntheticDomainSpec> domains;
  TransferMatrix transfer;
  NoiseSpec noise;
  AdoConfig config;
  SamplingMode sampling = SamplingMode::multinomial;
  std::vector<std::uint64_t> seeds;  // for multi-seed evaluation
  std::string policy = "ado";        // ado | uniform | natural | fixed:<file>

  std::unique_ptr<SyntheticLearner> make(std::uint64_t run_seed) const;
};

Scenario load_scenario(const std::string& path);

}  // namespace ado
