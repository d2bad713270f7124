#pragma once

#include <vector>

#include "ado/mixture.hpp"
#include "ado/scaling_law.hpp"

namespace ado {

struct PolicyHyperparams {
  double gamma1 = 0.1;     // credit EMA rate
  double gamma2 = 0.1;     // preference vs temporal-average mixing rate
  double smoothing = 0.5;  // credit power transform exponent s
  double delta_min = 0.01; // sampling probability floor

  void validate(std::size_t k) const;
};

// h(t) = gamma1*pi(t) + (1-gamma1)*h(t-1).
MixtureWeights update_credit(const MixtureWeights& h_prev,
                             const MixtureWeights& pi_t, double gamma1);

// lambda_k proportional to h_k^s, normalized.
MixtureWeights credit_score(const MixtureWeights& h, double s);

// rho_k proportional to mu_k * lambda_k * alpha_k * (loss_k(n) - eps_k).
// Falls back to mu when every domain's unnormalized score is zero.
MixtureWeights preference_distribution(const std::vector<PowerLawParams>& laws,
                                       double n, const MixtureWeights& lambda,
                                       const MixtureWeights& mu);

// pi_bar(t) = rho(t)/(t+1) + (1 - 1/(t+1))*pi_bar(t-1); running mean of rho.
MixtureWeights update_pi_bar(const MixtureWeights& pi_bar_prev,
                             const MixtureWeights& rho_t, long long t);

// pi(t) = clip(gamma2*rho(t) + (1-gamma2)*pi_bar(t-1), delta_min).
MixtureWeights mix_policy(const MixtureWeights& rho_t,
                          const MixtureWeights& pi_bar_prev,
                          const PolicyHyperparams& hp);

// Probability floor: scale by (1 - deficit), clamp entries up to min_prob,
// renormalize. Guarantees min entry >= min_prob / (1 + K*min_prob); the
// final normalization may leave entries slightly below min_prob itself.
MixtureWeights clip_min_probability(const MixtureWeights& probs,
                                    double min_prob);

}  // namespace ado
