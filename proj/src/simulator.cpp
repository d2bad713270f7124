#include "ado/simulator.hpp"

#include <cmath>
#include <string>

#include "ado/config.hpp"
#include "ado/error.hpp"

namespace ado {

void SyntheticDomainSpec::validate() const {
  if (!(true_alpha > 0.0))
    throw Error(ErrorCode::config, "domain true_alpha must be > 0");
  if (!(true_beta > 0.0))
    throw Error(ErrorCode::config, "domain true_beta must be > 0");
  if (!(true_eps >= 0.0))
    throw Error(ErrorCode::config, "domain true_eps must be >= 0");
  if (!(n0 >= 0.0)) throw Error(ErrorCode::config, "domain n0 must be >= 0");
}

TransferMatrix TransferMatrix::identity(std::size_t k) {
  TransferMatrix m;
  m.t.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) m.t[i][i] = 1.0;
  return m;
}

TransferMatrix TransferMatrix::uniform_offdiag(std::size_t k, double offdiag) {
  TransferMatrix m;
  m.t.assign(k, std::vector<double>(k, offdiag));
  for (std::size_t i = 0; i < k; ++i) m.t[i][i] = 1.0;
  return m;
}

void TransferMatrix::validate(std::size_t k) const {
  if (t.size() != k)
    throw Error(ErrorCode::dimension, "transfer matrix has wrong row count");
  for (std::size_t i = 0; i < k; ++i) {
    if (t[i].size() != k)
      throw Error(ErrorCode::dimension,
                  "transfer matrix row " + std::to_string(i) +
                      " has wrong length");
    for (std::size_t j = 0; j < k; ++j) {
      if (!(t[i][j] >= 0.0))
        throw Error(ErrorCode::config, "transfer entries must be >= 0");
      if (j != i && t[i][j] > t[i][i])
        throw Error(ErrorCode::config,
                    "transfer row " + std::to_string(i) +
                        ": diagonal must dominate");
    }
  }
}

SyntheticLearner::SyntheticLearner(std::vector<SyntheticDomainSpec> specs,
                                   TransferMatrix t, NoiseSpec noise,
                                   SamplingMode mode)
    : specs_(std::move(specs)),
      transfer_(std::move(t)),
      noise_(noise),
      mode_(mode),
      n_eff_(specs_.size(), 0.0),
      noise_rng_(noise.seed) {
  if (specs_.empty())
    throw Error(ErrorCode::config, "simulator needs at least one domain");
  for (const auto& s : specs_) s.validate();
  transfer_.validate(specs_.size());
  if (!(noise_.sigma >= 0.0))
    throw Error(ErrorCode::config, "noise sigma must be >= 0");
}

StepResult SyntheticLearner::step(const MixtureWeights& mixture,
                                  long long batch_size, Rng& rng) {
  const std::size_t k = specs_.size();
  if (mixture.size() != k)
    throw Error(ErrorCode::dimension,
                "mixture dimension does not match simulator domains");
  StepResult res;
  res.counts = mode_ == SamplingMode::multinomial
                   ? multinomial_counts(mixture.w, batch_size, rng)
                   : expected_counts(mixture.w, batch_size);
  for (std::size_t i = 0; i < k; ++i) {
    double gain = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      gain += transfer_.t[i][j] * static_cast<double>(res.counts[j]);
    n_eff_[i] += gain;
  }
  res.losses.resize(k);
  // One noise draw per domain per step, independent of the policy, so a
  // given noise seed yields the same disturbance stream for any mixture.
  for (std::size_t i = 0; i < k; ++i) {
    double xi = noise_.sigma > 0.0 ? noise_rng_.normal() : 0.0;
    res.losses[i] = true_loss(i) * std::exp(noise_.sigma * xi);
  }
  return res;
}

double SyntheticLearner::true_loss(std::size_t k) const {
  const SyntheticDomainSpec& s = specs_[k];
  return s.true_eps +
         s.true_beta * std::pow(s.n0 + n_eff_[k], -s.true_alpha);
}

std::unique_ptr<SyntheticLearner> make_learner(
    std::vector<SyntheticDomainSpec> specs, TransferMatrix t, NoiseSpec noise,
    SamplingMode mode) {
  return std::make_unique<SyntheticLearner>(std::move(specs), std::move(t),
                                            noise, mode);
}

PolicyEvalResult evaluate_policy(const LearnerFactory& factory,
                                 const PolicyUnderTest& policy,
                                 const AdoConfig& config,
                                 const std::vector<std::uint64_t>& seeds,
                                 SamplingMode mode) {
  if (seeds.empty())
    throw Error(ErrorCode::config, "evaluate_policy needs at least one seed");
  PolicyEvalResult out;
  std::size_t k = 0;
  for (std::uint64_t seed : seeds) {
    auto learner = factory(seed);
    k = learner->num_domains();
    AdoConfig cfg = config;
    cfg.seed = seed;
    if (policy.kind == PolicyUnderTest::Kind::fixed)
      run_pinned(*learner, policy.fixed_mixture, cfg, mode);
    else
      run(*learner, cfg, mode);
    std::vector<double> finals(k);
    for (std::size_t i = 0; i < k; ++i) finals[i] = learner->true_loss(i);
    out.final_losses.push_back(std::move(finals));
  }
  out.mean_final_losses.assign(k, 0.0);
  for (const auto& row : out.final_losses)
    for (std::size_t i = 0; i < k; ++i) out.mean_final_losses[i] += row[i];
  for (double& v : out.mean_final_losses)
    v /= static_cast<double>(out.final_losses.size());
  for (std::size_t i = 0; i < k; ++i) {
    out.unweighted_mean += out.mean_final_losses[i] / static_cast<double>(k);
    out.mu_weighted_mean += config.mu[i] * out.mean_final_losses[i];
  }
  return out;
}

std::unique_ptr<SyntheticLearner> Scenario::make(std::uint64_t run_seed) const {
  NoiseSpec n = noise;
  // Distinct run seeds get distinct but reproducible noise streams.
  n.seed = noise.seed + 0x9e3779b97f4a7c15ull * run_seed;
  return make_learner(domains, transfer, n, sampling);
}

Scenario load_scenario(const std::string& path) {
  KeyValueConfig cfg = KeyValueConfig::parse_file(path);
  Scenario sc;

  const long long k = cfg.get_int("domains");
  if (k < 1) throw Error(ErrorCode::config, path + ": domains must be >= 1");
  for (long long i = 0; i < k; ++i) {
    auto vals = cfg.get_doubles("domain_" + std::to_string(i));
    if (vals.size() != 4)
      throw Error(ErrorCode::config,
                  path + ": domain_" + std::to_string(i) +
                      " needs 4 values: alpha beta eps n0");
    SyntheticDomainSpec spec{vals[0], vals[1], vals[2], vals[3]};
    spec.validate();
    sc.domains.push_back(spec);
  }

  if (cfg.has("transfer_0")) {
    sc.transfer.t.clear();
    for (long long i = 0; i < k; ++i)
      sc.transfer.t.push_back(cfg.get_doubles("transfer_" + std::to_string(i)));
  } else if (cfg.has("transfer_offdiag")) {
    sc.transfer = TransferMatrix::uniform_offdiag(
        static_cast<std::size_t>(k), cfg.get_double("transfer_offdiag"));
  } else {
    sc.transfer = TransferMatrix::identity(static_cast<std::size_t>(k));
  }
  sc.transfer.validate(static_cast<std::size_t>(k));

  sc.noise.sigma = cfg.get_double("sigma", 0.0);
  sc.noise.seed = cfg.get_u64("noise_seed", 1);

  const std::string sampling = cfg.get_string("sampling", "multinomial");
  if (sampling == "multinomial")
    sc.sampling = SamplingMode::multinomial;
  else if (sampling == "expected")
    sc.sampling = SamplingMode::expected;
  else
    throw Error(ErrorCode::config,
                path + ": sampling must be multinomial or expected");

  AdoConfig& c = sc.config;
  if (cfg.has("prior")) {
    const std::string prior = cfg.get_string("prior");
    if (prior == "uniform")
      c.mu = MixtureWeights::uniform(static_cast<std::size_t>(k));
    else
      c.mu = normalized(cfg.get_doubles("prior"), "scenario prior");
  } else {
    c.mu = MixtureWeights::uniform(static_cast<std::size_t>(k));
  }
  if (c.mu.size() != static_cast<std::size_t>(k))
    throw Error(ErrorCode::config, path + ": prior has wrong dimension");

  c.hp.gamma1 = cfg.get_double("gamma1", 0.1);
  c.hp.gamma2 = cfg.get_double("gamma2", 0.1);
  c.hp.smoothing = cfg.get_double("smoothing", 0.5);
  c.hp.delta_min = cfg.get_double("delta_min", 0.01);
  c.t_update = cfg.get_int("t_update", 1000);
  c.t_warmup = cfg.get_int("t_warmup", 5000);
  c.batch_size = cfg.get_int("batch_size", 256);
  c.total_steps = cfg.get_int("total_steps");
  c.seed = cfg.get_u64("seed", 0);
  c.fit.huber_delta = cfg.get_double("huber_delta", c.fit.huber_delta);
  c.fit.skip_initial_steps = cfg.get_int("skip_steps", c.fit.skip_initial_steps);
  c.fit.subsample_interval = cfg.get_int("subsample", c.fit.subsample_interval);
  c.fit.local_opt_max_iters = static_cast<int>(
      cfg.get_int("fit_max_iters", c.fit.local_opt_max_iters));
  c.validate();

  if (cfg.has("seeds"))
    sc.seeds = cfg.get_u64s("seeds");
  else
    sc.seeds = {c.seed};
  sc.policy = cfg.get_string("policy", "ado");
  return sc;
}

}  // namespace ado
