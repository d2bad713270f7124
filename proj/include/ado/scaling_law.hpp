#pragma once

#include <string>
#include <vector>

namespace ado {

// One domain's loss-vs-samples power law: loss(n) = eps + beta * n^(-alpha).
// beta and eps are carried in log form, matching how they are fitted.
struct PowerLawParams {
  double alpha = 0.0;
  double log_beta = 0.0;
  double log_eps = 0.0;

  double beta() const;
  double eps() const;
};

struct CurvePoint {
  double n = 0.0;     // cumulative total samples at observation, >= 1
  double loss = 0.0;  // mean cross-entropy in nats, > 0
};

// Observed losses of one domain, ordered by strictly increasing n.
struct LearningCurve {
  std::string domain_id;
  std::vector<CurvePoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void validate() const;  // throws on unordered n or nonpositive losses
};

struct FitBounds {
  double alpha_lo = 1e-4;
  double alpha_hi = 0.8;
  double log_beta_hi = 6.5;
  double log_eps_lo = -4.0;
};

// Fitting configuration. Grid defaults cover a 7x8x6 initialization sweep.
struct FitConfig {
  double huber_delta = 0.001;
  std::vector<double> grid_alpha = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  std::vector<double> grid_log_beta = {-2, -1, 0, 1, 2, 3, 4, 5};
  std::vector<double> grid_log_eps = {-2, -1.5, -1, -0.5, 1, 1.5};
  FitBounds bounds;
  long long skip_initial_steps = 500;
  long long subsample_interval = 10;
  int local_opt_max_iters = 100;
  double convergence_tol = 1e-11;

  void validate() const;
};

struct FitResult {
  PowerLawParams params;
  double objective = 0.0;
  bool degenerate = false;  // flat-curve fallback, not a minimizer
};

// loss(n) = eps + beta * n^(-alpha). Rejects n < 1.
double predict_loss(const PowerLawParams& params, double n);

// d loss / d n = -alpha * beta * n^(-alpha) / n. Rejects n < 1.
double loss_derivative(const PowerLawParams& params, double n);

// Reducible part beta * n^(-alpha), i.e. predict_loss(n) - eps without the
// cancellation of forming the difference.
double reducible_loss(const PowerLawParams& params, double n);

// Drops observations from the first skip_initial_steps training steps
// (a point recorded at the end of 0-based step t carries n=(t+1)*step_size,
// so the cut is n <= skip_initial_steps*step_size), then keeps every
// subsample_interval-th survivor. Throws if nothing survives.
LearningCurve preprocess_curve(const LearningCurve& curve,
                               const FitConfig& config, double step_size);

// Sum over points of Huber_delta(log predicted - log observed).
double huber_log_objective(const PowerLawParams& params,
                           const LearningCurve& curve, double delta);

// Grid-initialized, bound-clamped local minimization of the Huber log
// objective with analytic gradients. The curve is used as given; callers
// preprocess first. Needs at least 4 points. Flat curves (total log-loss
// range below 1e-6) short-circuit to a degenerate fallback law with
// alpha at the lower bound and near-zero amplitude.
FitResult fit_power_law(const LearningCurve& curve, const FitConfig& config);

}  // namespace ado
