#include "ado/policy.hpp"

#include <cmath>

#include "ado/error.hpp"

namespace ado {

void PolicyHyperparams::validate(std::size_t k) const {
  if (!(gamma1 > 0.0 && gamma1 <= 1.0))
    throw Error(ErrorCode::config, "gamma1 must be in (0, 1]");
  if (!(gamma2 >= 0.0 && gamma2 <= 1.0))
    throw Error(ErrorCode::config, "gamma2 must be in [0, 1]");
  if (!(smoothing > 0.0 && smoothing <= 1.0))
    throw Error(ErrorCode::config, "smoothing exponent must be in (0, 1]");
  if (k > 0 && !(delta_min >= 0.0 && delta_min < 1.0 / static_cast<double>(k)))
    throw Error(ErrorCode::config, "delta_min must be in [0, 1/K)");
}

MixtureWeights update_credit(const MixtureWeights& h_prev,
                             const MixtureWeights& pi_t, double gamma1) {
  require_same_size(h_prev, pi_t, "update_credit");
  require_simplex(h_prev, "update_credit");
  require_simplex(pi_t, "update_credit");
  std::vector<double> out(h_prev.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = gamma1 * pi_t[k] + (1.0 - gamma1) * h_prev[k];
  return MixtureWeights(std::move(out));
}

MixtureWeights credit_score(const MixtureWeights& h, double s) {
  require_simplex(h, "credit_score");
  if (!(s > 0.0 && s <= 1.0))
    throw Error(ErrorCode::domain, "credit_score: s must be in (0, 1]");
  std::vector<double> out(h.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = std::pow(std::max(h[k], 0.0), s);
  return normalized(std::move(out), "credit_score");
}

MixtureWeights preference_distribution(const std::vector<PowerLawParams>& laws,
                                       double n, const MixtureWeights& lambda,
                                       const MixtureWeights& mu) {
  require_same_size(lambda, mu, "preference_distribution");
  if (laws.size() != mu.size())
    throw Error(ErrorCode::dimension,
                "preference_distribution: laws/mixture dimension mismatch");
  require_simplex(lambda, "preference_distribution");
  require_simplex(mu, "preference_distribution");
  if (!(n >= 1.0))
    throw Error(ErrorCode::domain, "preference_distribution: n must be >= 1");

  std::vector<double> score(mu.size());
  double total = 0.0;
  for (std::size_t k = 0; k < score.size(); ++k) {
    score[k] = mu[k] * lambda[k] * laws[k].alpha * reducible_loss(laws[k], n);
    total += score[k];
  }
  // Every domain saturated: no signal, fall back to the prior.
  if (!(total > 0.0) || !std::isfinite(total)) return mu;
  for (double& v : score) v /= total;
  return MixtureWeights(std::move(score));
}

MixtureWeights update_pi_bar(const MixtureWeights& pi_bar_prev,
                             const MixtureWeights& rho_t, long long t) {
  require_same_size(pi_bar_prev, rho_t, "update_pi_bar");
  require_simplex(pi_bar_prev, "update_pi_bar");
  require_simplex(rho_t, "update_pi_bar");
  if (t < 0) throw Error(ErrorCode::domain, "update_pi_bar: t must be >= 0");
  const double c = 1.0 / static_cast<double>(t + 1);
  std::vector<double> out(rho_t.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = c * rho_t[k] + (1.0 - c) * pi_bar_prev[k];
  return MixtureWeights(std::move(out));
}

MixtureWeights mix_policy(const MixtureWeights& rho_t,
                          const MixtureWeights& pi_bar_prev,
                          const PolicyHyperparams& hp) {
  require_same_size(rho_t, pi_bar_prev, "mix_policy");
  require_simplex(rho_t, "mix_policy");
  require_simplex(pi_bar_prev, "mix_policy");
  hp.validate(rho_t.size());
  std::vector<double> mixed(rho_t.size());
  for (std::size_t k = 0; k < mixed.size(); ++k)
    mixed[k] = hp.gamma2 * rho_t[k] + (1.0 - hp.gamma2) * pi_bar_prev[k];
  return clip_min_probability(MixtureWeights(std::move(mixed)), hp.delta_min);
}

MixtureWeights clip_min_probability(const MixtureWeights& probs,
                                    double min_prob) {
  require_simplex(probs, "clip_min_probability");
  const double k = static_cast<double>(probs.size());
  if (!(min_prob >= 0.0) || min_prob >= 1.0 / k)
    throw Error(ErrorCode::domain,
                "clip_min_probability: floor must be in [0, 1/K)");

  double total = probs.sum();
  double deficit = std::max(min_prob * k - total, 0.0);
  double scale = (1.0 - deficit) / total;
  std::vector<double> out(probs.size());
  double clipped_total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::max(probs[i] * scale, min_prob);
    clipped_total += out[i];
  }
  for (double& v : out) v /= clipped_total;
  return MixtureWeights(std::move(out));
}

}  // namespace ado
