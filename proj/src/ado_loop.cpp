#include "ado/ado_loop.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ado/error.hpp"

namespace ado {

void AdoConfig::validate() const {
  require_simplex(mu, "AdoConfig.mu");
  hp.validate(mu.size());
  fit.validate();
  if (t_warmup < 1) throw Error(ErrorCode::config, "t_warmup must be >= 1");
  if (t_update < 1) throw Error(ErrorCode::config, "t_update must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::config, "batch_size must be >= 1");
  if (total_steps <= t_warmup)
    throw Error(ErrorCode::config, "total_steps must exceed t_warmup");
}

namespace {

void check_step_result(const StepResult& res, std::size_t k,
                       long long batch_size) {
  if (res.counts.size() != k || res.losses.size() != k)
    throw Error(ErrorCode::run, "learner returned wrong dimension");
  long long total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (res.counts[i] < 0)
      throw Error(ErrorCode::run, "learner returned a negative count");
    total += res.counts[i];
    if (res.counts[i] > 0 && !res.losses[i].has_value())
      throw Error(ErrorCode::run,
                  "learner omitted the loss of a sampled domain");
    if (res.losses[i].has_value() &&
        (!std::isfinite(*res.losses[i]) || *res.losses[i] <= 0.0))
      throw Error(ErrorCode::run, "learner returned a nonpositive loss");
  }
  if (total != batch_size)
    throw Error(ErrorCode::run, "learner counts do not sum to batch_size");
}

void append_observations(AdoState& state, const StepResult& res) {
  for (std::size_t k = 0; k < res.counts.size(); ++k) {
    // Unsampled domains gain no point; stale losses would bias the fit.
    if (res.counts[k] > 0) {
      state.loss_buffers[k].points.push_back(
          {static_cast<double>(state.n_total), *res.losses[k]});
    }
  }
}

// Substitute law when a buffer has too little data for a real fit.
FitResult fallback_law(const LearningCurve& buffer, const FitConfig& cfg) {
  FitResult out;
  out.degenerate = true;
  out.params.alpha = cfg.bounds.alpha_lo;
  if (buffer.empty()) {
    out.params.log_eps = 0.0;
    out.params.log_beta = -30.0;
    return out;
  }
  const double first = buffer.points.front().loss;
  const double last = buffer.points.back().loss;
  out.params.log_eps = std::log(last) - 1e-6;
  double amp = first - std::exp(out.params.log_eps);
  out.params.log_beta = std::log(std::max(amp, 1e-12 * first));
  return out;
}

enum class FitFailurePolicy { abort_run, keep_previous };

void refit_domain(AdoState& state, const AdoConfig& config, std::size_t k,
                  FitFailurePolicy on_failure,
                  std::vector<std::string>* warnings) {
  const LearningCurve& buffer = state.loss_buffers[k];
  LearningCurve prepared;
  bool enough = false;
  try {
    prepared = preprocess_curve(buffer, config.fit,
                                static_cast<double>(config.batch_size));
    double lo = std::log(prepared.points.front().loss);
    double hi = lo;
    for (const auto& p : prepared.points) {
      lo = std::min(lo, std::log(p.loss));
      hi = std::max(hi, std::log(p.loss));
    }
    enough = prepared.size() >= 4 || hi - lo < 1e-6;
  } catch (const Error&) {
    enough = false;
  }

  if (!enough) {
    if (on_failure == FitFailurePolicy::abort_run) {
      state.laws[k] = fallback_law(buffer, config.fit);
      if (warnings)
        warnings->push_back("domain " + buffer.domain_id +
                            ": insufficient data, degenerate law");
      return;
    }
    if (warnings)
      warnings->push_back("domain " + buffer.domain_id +
                          ": insufficient data, keeping previous law");
    return;
  }

  try {
    state.laws[k] = fit_power_law(prepared, config.fit);
  } catch (const Error& e) {
    if (on_failure == FitFailurePolicy::abort_run)
      throw Error(ErrorCode::fit,
                  "initial fit failed for domain " + buffer.domain_id + ": " +
                      e.what());
    if (warnings)
      warnings->push_back("domain " + buffer.domain_id +
                          ": refit failed (" + e.what() +
                          "), keeping previous law");
  }
}

std::vector<PowerLawParams> current_laws(const AdoState& state) {
  std::vector<PowerLawParams> laws;
  laws.reserve(state.laws.size());
  for (const auto& fr : state.laws) laws.push_back(fr.params);
  return laws;
}

}  // namespace

AdoState warmup(Learner& learner, const AdoConfig& config, SamplingMode mode,
                RunLog* log) {
  config.validate();
  const std::size_t k = learner.num_domains();
  if (k != config.mu.size())
    throw Error(ErrorCode::dimension,
                "learner domain count does not match the prior");
  (void)mode;

  AdoState state;
  state.h = config.mu;
  state.pi_bar = config.mu;
  state.last_pi = config.mu;
  state.rng = Rng(config.seed);
  state.laws.assign(k, FitResult{});
  state.loss_buffers.resize(k);
  for (std::size_t i = 0; i < k; ++i)
    state.loss_buffers[i].domain_id = std::to_string(i);

  for (long long t = 0; t < config.t_warmup; ++t) {
    StepResult res = learner.step(config.mu, config.batch_size, state.rng);
    check_step_result(res, k, config.batch_size);
    ++state.step;
    state.n_total += config.batch_size;
    append_observations(state, res);
    if (log) {
      StepRecord rec;
      rec.step = state.step;
      rec.n_total = state.n_total;
      rec.warmup = true;
      rec.pi = config.mu;
      rec.rho = config.mu;
      rec.h = state.h;
      rec.pi_bar = state.pi_bar;
      rec.losses = res.losses;
      log->steps.push_back(std::move(rec));
    }
  }

  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < k; ++i)
    refit_domain(state, config, i, FitFailurePolicy::abort_run, &warnings);
  if (log && !log->steps.empty()) {
    log->steps.back().refit = state.laws;
    log->steps.back().refit_warnings = std::move(warnings);
  }
  return state;
}

void ado_step(AdoState& state, Learner& learner, const AdoConfig& config,
              SamplingMode mode, RunLog* log) {
  (void)mode;
  const std::size_t k = learner.num_domains();
  const long long t_loop = state.step - config.t_warmup;
  if (t_loop < 0)
    throw Error(ErrorCode::run, "ado_step called before warmup completed");

  MixtureWeights lambda = credit_score(state.h, config.hp.smoothing);
  MixtureWeights rho =
      preference_distribution(current_laws(state),
                              static_cast<double>(state.n_total), lambda,
                              config.mu);
  MixtureWeights pi = mix_policy(rho, state.pi_bar, config.hp);

  StepResult res = learner.step(pi, config.batch_size, state.rng);
  check_step_result(res, k, config.batch_size);
  ++state.step;
  state.n_total += config.batch_size;
  append_observations(state, res);

  state.h = update_credit(state.h, pi, config.hp.gamma1);
  state.pi_bar = update_pi_bar(state.pi_bar, rho, t_loop);
  state.last_pi = pi;

  std::vector<FitResult> refit;
  std::vector<std::string> warnings;
  if (state.step % config.t_update == 0) {
    for (std::size_t i = 0; i < k; ++i)
      refit_domain(state, config, i, FitFailurePolicy::keep_previous,
                   &warnings);
    refit = state.laws;
  }

  if (log) {
    StepRecord rec;
    rec.step = state.step;
    rec.n_total = state.n_total;
    rec.warmup = false;
    rec.pi = pi;
    rec.rho = rho;
    rec.h = state.h;
    rec.pi_bar = state.pi_bar;
    rec.losses = res.losses;
    rec.refit = std::move(refit);
    rec.refit_warnings = std::move(warnings);
    log->steps.push_back(std::move(rec));
  }
}

RunLog run(Learner& learner, const AdoConfig& config, SamplingMode mode) {
  RunLog log;
  log.num_domains = learner.num_domains();
  log.seed = config.seed;
  AdoState state = warmup(learner, config, mode, &log);
  while (state.step < config.total_steps)
    ado_step(state, learner, config, mode, &log);
  return log;
}

RunLog run_pinned(Learner& learner, const MixtureWeights& pinned,
                  const AdoConfig& config, SamplingMode mode) {
  (void)mode;
  config.validate();
  require_simplex(pinned, "run_pinned");
  const std::size_t k = learner.num_domains();
  if (k != pinned.size())
    throw Error(ErrorCode::dimension,
                "learner domain count does not match the pinned mixture");

  RunLog log;
  log.num_domains = k;
  log.seed = config.seed;
  Rng rng(config.seed);
  long long n_total = 0;
  for (long long t = 1; t <= config.total_steps; ++t) {
    StepResult res = learner.step(pinned, config.batch_size, rng);
    check_step_result(res, k, config.batch_size);
    n_total += config.batch_size;
    StepRecord rec;
    rec.step = t;
    rec.n_total = n_total;
    rec.warmup = t <= config.t_warmup;
    rec.pi = pinned;
    rec.rho = pinned;
    rec.h = pinned;
    rec.pi_bar = pinned;
    rec.losses = res.losses;
    log.steps.push_back(std::move(rec));
  }
  return log;
}

std::string RunLog::to_jsonl() const {
  using nlohmann::json;
  std::ostringstream out;
  json meta;
  meta["type"] = "meta";
  meta["num_domains"] = num_domains;
  meta["seed"] = seed;
  out << meta.dump() << '\n';
  for (const auto& rec : steps) {
    json j;
    j["step"] = rec.step;
    j["n_total"] = rec.n_total;
    j["phase"] = rec.warmup ? "warmup" : "adaptive";
    j["pi"] = rec.pi.w;
    j["rho"] = rec.rho.w;
    j["h"] = rec.h.w;
    j["pi_bar"] = rec.pi_bar.w;
    json losses = json::object();
    for (std::size_t k = 0; k < rec.losses.size(); ++k)
      if (rec.losses[k].has_value())
        losses[std::to_string(k)] = *rec.losses[k];
    j["losses"] = losses;
    if (!rec.refit.empty()) {
      json refit = json::object();
      for (std::size_t k = 0; k < rec.refit.size(); ++k) {
        const FitResult& fr = rec.refit[k];
        refit[std::to_string(k)] = {{"alpha", fr.params.alpha},
                                    {"log_beta", fr.params.log_beta},
                                    {"log_eps", fr.params.log_eps},
                                    {"objective", fr.objective},
                                    {"degenerate", fr.degenerate}};
      }
      j["refit"] = refit;
    }
    if (!rec.refit_warnings.empty()) j["warnings"] = rec.refit_warnings;
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace ado
