#include "ado/scaling_law.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ado/error.hpp"

namespace ado {

double PowerLawParams::beta() const { return std::exp(log_beta); }
double PowerLawParams::eps() const { return std::exp(log_eps); }

void LearningCurve::validate() const {
  double prev_n = 0.0;
  for (const auto& p : points) {
    if (!(p.n >= 1.0))
      throw Error(ErrorCode::domain,
                  "curve '" + domain_id + "': sample count below 1");
    if (p.n <= prev_n)
      throw Error(ErrorCode::domain,
                  "curve '" + domain_id + "': n values not strictly increasing");
    if (!(p.loss > 0.0) || !std::isfinite(p.loss))
      throw Error(ErrorCode::domain,
                  "curve '" + domain_id + "': nonpositive or non-finite loss");
    prev_n = p.n;
  }
}

void FitConfig::validate() const {
  if (!(huber_delta > 0.0))
    throw Error(ErrorCode::config, "huber_delta must be > 0");
  if (grid_alpha.empty() || grid_log_beta.empty() || grid_log_eps.empty())
    throw Error(ErrorCode::config, "initialization grids must be non-empty");
  if (!(bounds.alpha_lo < bounds.alpha_hi))
    throw Error(ErrorCode::config, "alpha bounds must satisfy lo < hi");
  if (subsample_interval < 1)
    throw Error(ErrorCode::config, "subsample_interval must be >= 1");
  if (skip_initial_steps < 0)
    throw Error(ErrorCode::config, "skip_initial_steps must be >= 0");
  if (local_opt_max_iters < 1)
    throw Error(ErrorCode::config, "local_opt_max_iters must be >= 1");
}

namespace {

void require_n(double n) {
  if (!(n >= 1.0))
    throw Error(ErrorCode::domain, "sample count n must be >= 1");
}

}  // namespace

double predict_loss(const PowerLawParams& params, double n) {
  require_n(n);
  return std::exp(params.log_eps) +
         std::exp(params.log_beta - params.alpha * std::log(n));
}

double loss_derivative(const PowerLawParams& params, double n) {
  require_n(n);
  return -params.alpha *
         std::exp(params.log_beta - params.alpha * std::log(n)) / n;
}

double reducible_loss(const PowerLawParams& params, double n) {
  require_n(n);
  return std::exp(params.log_beta - params.alpha * std::log(n));
}

LearningCurve preprocess_curve(const LearningCurve& curve,
                               const FitConfig& config, double step_size) {
  curve.validate();
  if (!(step_size > 0.0))
    throw Error(ErrorCode::domain, "step_size must be > 0");
  const double n_cut =
      static_cast<double>(config.skip_initial_steps) * step_size;
  LearningCurve out;
  out.domain_id = curve.domain_id;
  long long survivor = 0;
  for (const auto& p : curve.points) {
    if (p.n <= n_cut) continue;
    if (survivor % config.subsample_interval == 0) out.points.push_back(p);
    ++survivor;
  }
  if (out.points.empty())
    throw Error(ErrorCode::fit, "curve '" + curve.domain_id +
                                    "': no points survive preprocessing");
  return out;
}

double huber_log_objective(const PowerLawParams& params,
                           const LearningCurve& curve, double delta) {
  if (curve.empty())
    throw Error(ErrorCode::domain, "huber objective of an empty curve");
  if (!(delta > 0.0))
    throw Error(ErrorCode::domain, "huber delta must be > 0");
  double total = 0.0;
  for (const auto& p : curve.points) {
    if (!(p.loss > 0.0))
      throw Error(ErrorCode::domain, "observed loss must be > 0");
    double r = std::log(predict_loss(params, p.n)) - std::log(p.loss);
    double a = std::abs(r);
    total += a <= delta ? 0.5 * r * r : delta * (a - 0.5 * delta);
  }
  return total;
}

namespace {

using Vec3 = std::array<double, 3>;  // (alpha, log_beta, log_eps)

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm2(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 clamp_to_bounds(Vec3 x, const FitBounds& b) {
  x[0] = std::clamp(x[0], b.alpha_lo, b.alpha_hi);
  x[1] = std::min(x[1], b.log_beta_hi);
  x[2] = std::max(x[2], b.log_eps_lo);
  return x;
}

struct CurveData {
  std::vector<double> log_n;
  std::vector<double> log_loss;
};

// Huber objective of the log-residuals; gradient via
// d log pred / d(alpha, log_beta, log_eps) = (-b*ln n, b, eps) / pred.
double objective(const CurveData& d, const Vec3& x, double delta,
                 Vec3* grad) {
  const double alpha = x[0], log_beta = x[1], eps = std::exp(x[2]);
  double f = 0.0;
  double ga = 0.0, gb = 0.0, ge = 0.0;
  const std::size_t m = d.log_n.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double ln_n = d.log_n[i];
    const double b = std::exp(log_beta - alpha * ln_n);
    const double pred = eps + b;
    const double r = std::log(pred) - d.log_loss[i];
    const double a = std::abs(r);
    double w;  // Huber derivative at r
    if (a <= delta) {
      f += 0.5 * r * r;
      w = r;
    } else {
      f += delta * (a - 0.5 * delta);
      w = r > 0.0 ? delta : -delta;
    }
    if (grad) {
      const double scale = w / pred;
      ga -= scale * b * ln_n;
      gb += scale * b;
      ge += scale * eps;
    }
  }
  if (grad) *grad = {ga, gb, ge};
  return f;
}

struct LocalMin {
  Vec3 x{0.0, 0.0, 0.0};
  double f = std::numeric_limits<double>::infinity();
};

// Bounded L-BFGS: two-loop direction, backtracking line search on the
// clamped candidate, curvature pairs skipped when s'y is not positive.
LocalMin minimize_from(const CurveData& data, Vec3 x0, const FitConfig& cfg) {
  constexpr int kMemory = 8;
  const FitBounds& bounds = cfg.bounds;
  Vec3 x = clamp_to_bounds(x0, bounds);
  Vec3 g;
  double f = objective(data, x, cfg.huber_delta, &g);

  std::array<Vec3, kMemory> s_hist, y_hist;
  std::array<double, kMemory> rho_hist{};
  int hist_count = 0, hist_head = 0;

  for (int iter = 0; iter < cfg.local_opt_max_iters; ++iter) {
    // Two-loop recursion for d = -H*g.
    Vec3 q = g;
    std::array<double, kMemory> a_coef{};
    for (int k = 0; k < hist_count; ++k) {
      int idx = (hist_head - 1 - k + 2 * kMemory) % kMemory;
      a_coef[idx] = rho_hist[idx] * dot(s_hist[idx], q);
      for (int j = 0; j < 3; ++j) q[j] -= a_coef[idx] * y_hist[idx][j];
    }
    if (hist_count > 0) {
      int newest = (hist_head - 1 + kMemory) % kMemory;
      double yy = dot(y_hist[newest], y_hist[newest]);
      double scale = yy > 0.0 ? 1.0 / (rho_hist[newest] * yy) : 1.0;
      for (int j = 0; j < 3; ++j) q[j] *= scale;
    } else {
      double gn = norm2(g);
      if (gn > 1.0)
        for (int j = 0; j < 3; ++j) q[j] /= gn;
    }
    for (int k = 0; k < hist_count; ++k) {
      int idx = (hist_head - hist_count + k + 2 * kMemory) % kMemory;
      double b_coef = rho_hist[idx] * dot(y_hist[idx], q);
      for (int j = 0; j < 3; ++j)
        q[j] += (a_coef[idx] - b_coef) * s_hist[idx][j];
    }
    Vec3 dir = {-q[0], -q[1], -q[2]};

    // Backtracking on the projected candidate.
    constexpr double kArmijo = 1e-4;
    double t = 1.0;
    Vec3 x_new = x;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      Vec3 cand =
          clamp_to_bounds({x[0] + t * dir[0], x[1] + t * dir[1],
                           x[2] + t * dir[2]},
                          bounds);
      Vec3 step = {cand[0] - x[0], cand[1] - x[1], cand[2] - x[2]};
      if (step[0] == 0.0 && step[1] == 0.0 && step[2] == 0.0) break;
      double fc = objective(data, cand, cfg.huber_delta, nullptr);
      if (std::isfinite(fc) && fc <= f + kArmijo * dot(g, step)) {
        x_new = cand;
        f_new = fc;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (hist_count > 0) {
        // L-BFGS direction failed; retry from steepest descent.
        hist_count = 0;
        hist_head = 0;
        continue;
      }
      break;  // no descent along -g either: converged (possibly at a bound)
    }

    Vec3 g_new;
    double f_check = objective(data, x_new, cfg.huber_delta, &g_new);
    (void)f_check;

    Vec3 s = {x_new[0] - x[0], x_new[1] - x[1], x_new[2] - x[2]};
    Vec3 y = {g_new[0] - g[0], g_new[1] - g[1], g_new[2] - g[2]};
    double sy = dot(s, y);
    if (sy > 1e-12 * norm2(s) * norm2(y) && sy > 0.0) {
      s_hist[hist_head] = s;
      y_hist[hist_head] = y;
      rho_hist[hist_head] = 1.0 / sy;
      hist_head = (hist_head + 1) % kMemory;
      if (hist_count < kMemory) ++hist_count;
    }

    double drop = f - f_new;
    x = x_new;
    g = g_new;
    f = f_new;
    if (drop <= cfg.convergence_tol * std::max(1.0, std::abs(f))) break;
  }
  return {x, f};
}

FitResult degenerate_flat_fit(const LearningCurve& curve,
                              const FitConfig& cfg) {
  // Flat curve: pin eps just under the last loss so the reducible part is
  // effectively zero, alpha at its lower bound. Intentionally unclamped:
  // a flat loss below exp(log_eps_lo) still needs eps at the loss level.
  const double first = curve.points.front().loss;
  const double last = curve.points.back().loss;
  FitResult out;
  out.degenerate = true;
  out.params.alpha = cfg.bounds.alpha_lo;
  out.params.log_eps = std::log(last) - 1e-6;
  double amp = first - std::exp(out.params.log_eps);
  out.params.log_beta = std::log(std::max(amp, 1e-12 * first));
  out.objective = huber_log_objective(out.params, curve, cfg.huber_delta);
  return out;
}

}  // namespace

FitResult fit_power_law(const LearningCurve& curve, const FitConfig& config) {
  config.validate();
  curve.validate();
  if (curve.empty())
    throw Error(ErrorCode::fit,
                "curve '" + curve.domain_id + "': no points to fit");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : curve.points) {
    double ll = std::log(p.loss);
    lo = std::min(lo, ll);
    hi = std::max(hi, ll);
  }
  if (hi - lo < 1e-6) return degenerate_flat_fit(curve, config);

  if (curve.size() < 4)
    throw Error(ErrorCode::fit,
                "curve '" + curve.domain_id + "': " +
                    std::to_string(curve.size()) +
                    " points, at least 4 required");

  CurveData data;
  data.log_n.reserve(curve.size());
  data.log_loss.reserve(curve.size());
  for (const auto& p : curve.points) {
    data.log_n.push_back(std::log(p.n));
    data.log_loss.push_back(std::log(p.loss));
  }

  LocalMin best;
  for (double a0 : config.grid_alpha) {
    for (double lb0 : config.grid_log_beta) {
      for (double le0 : config.grid_log_eps) {
        LocalMin m = minimize_from(data, {a0, lb0, le0}, config);
        if (std::isfinite(m.f) && m.f < best.f) best = m;
      }
    }
  }
  if (!std::isfinite(best.f))
    throw Error(ErrorCode::fit, "curve '" + curve.domain_id +
                                    "': no initialization reached a finite "
                                    "objective");
  FitResult out;
  out.params = {best.x[0], best.x[1], best.x[2]};
  out.objective = best.f;
  return out;
}

}  // namespace ado
