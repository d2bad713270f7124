#include "ado/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ado/error.hpp"

namespace ado {

namespace {

double sigmoid(double m) {
  if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
  double e = std::exp(m);
  return e / (1.0 + e);
}

// log(1 + exp(-m)), the logistic loss at margin m.
double softplus_neg(double m) {
  if (m >= 0.0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

DoublyStochastic sinkhorn(const ScoreMatrix& z, double temperature,
                          int iters) {
  if (z.rows != z.cols || z.rows == 0)
    throw Error(ErrorCode::dimension, "sinkhorn needs a square matrix");
  if (!(temperature > 0.0))
    throw Error(ErrorCode::domain, "sinkhorn temperature must be > 0");
  if (iters < 1) throw Error(ErrorCode::domain, "sinkhorn iters must be >= 1");
  for (double v : z.data)
    if (!std::isfinite(v))
      throw Error(ErrorCode::domain, "sinkhorn input must be finite");

  const std::size_t n = z.rows;
  Matrix x(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
      row_max = std::max(row_max, z.at(i, j));
    for (std::size_t j = 0; j < n; ++j)
      x.at(i, j) = std::exp((z.at(i, j) - row_max) / temperature);
  }
  for (int r = 0; r < iters; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += x.at(i, j);
      for (std::size_t j = 0; j < n; ++j) x.at(i, j) /= s;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += x.at(i, j);
      for (std::size_t i = 0; i < n; ++i) x.at(i, j) /= s;
    }
  }
  return x;
}

bool is_doubly_stochastic(const Matrix& x, double tol) {
  if (x.rows != x.cols || x.rows == 0) return false;
  for (double v : x.data)
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
  for (std::size_t i = 0; i < x.rows; ++i) {
    double rs = 0.0, cs = 0.0;
    for (std::size_t j = 0; j < x.cols; ++j) {
      rs += x.at(i, j);
      cs += x.at(j, i);
    }
    if (std::abs(rs - 1.0) > tol || std::abs(cs - 1.0) > tol) return false;
  }
  return true;
}

void TeacherStudentProblem::validate() const {
  if (x.empty()) throw Error(ErrorCode::domain, "problem has no data");
  if (y.size() != x.size())
    throw Error(ErrorCode::dimension, "label count does not match data");
  for (const auto& xi : x)
    if (xi.size() != theta0.size())
      throw Error(ErrorCode::dimension, "input dimension mismatch");
  for (double yi : y)
    if (yi != 1.0 && yi != -1.0)
      throw Error(ErrorCode::domain, "labels must be +-1");
  if (!(eta >= 0.0) || !std::isfinite(eta))
    throw Error(ErrorCode::domain, "eta must be finite and >= 0");
}

TeacherStudentProblem make_teacher_student(std::size_t n, std::size_t d,
                                           double eta, double init_scale,
                                           Rng& rng) {
  TeacherStudentProblem p;
  p.eta = eta;
  std::vector<double> teacher(d);
  for (double& v : teacher) v = rng.normal();
  p.x.resize(n);
  p.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.x[i].resize(d);
    for (double& v : p.x[i]) v = rng.normal();
    p.y[i] = dot(teacher, p.x[i]) >= 0.0 ? 1.0 : -1.0;
  }
  p.theta0.resize(d);
  for (double& v : p.theta0) v = init_scale * rng.normal();
  p.validate();
  return p;
}

namespace {

double full_data_loss(const TeacherStudentProblem& p,
                      const std::vector<double>& theta) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    total += softplus_neg(p.y[i] * dot(theta, p.x[i]));
  return total;
}

}  // namespace

double meta_objective_perm(const Permutation& sigma,
                           const TeacherStudentProblem& problem) {
  problem.validate();
  const std::size_t n = problem.size();
  if (sigma.size() != n)
    throw Error(ErrorCode::dimension, "permutation length mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t v : sigma) {
    if (v >= n || seen[v])
      throw Error(ErrorCode::domain, "not a permutation of [N]");
    seen[v] = true;
  }
  std::vector<double> theta = problem.theta0;
  double total = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t j = sigma[t];
    const double m = problem.y[j] * dot(theta, problem.x[j]);
    const double coef = (sigmoid(m) - 1.0) * problem.y[j];
    for (std::size_t c = 0; c < theta.size(); ++c)
      theta[c] -= problem.eta * coef * problem.x[j][c];
    total += full_data_loss(problem, theta);
  }
  return total / static_cast<double>(n);
}

double meta_objective_relaxed(const DoublyStochastic& x,
                              const TeacherStudentProblem& problem) {
  problem.validate();
  const std::size_t n = problem.size();
  if (x.rows != n || x.cols != n)
    throw Error(ErrorCode::dimension, "weight matrix dimension mismatch");
  const double step_scale = problem.eta / static_cast<double>(n);
  std::vector<double> theta = problem.theta0;
  std::vector<double> gsum(problem.dim());
  double total = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    std::fill(gsum.begin(), gsum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double m = problem.y[j] * dot(theta, problem.x[j]);
      const double coef = x.at(t, j) * (sigmoid(m) - 1.0) * problem.y[j];
      for (std::size_t c = 0; c < gsum.size(); ++c)
        gsum[c] += coef * problem.x[j][c];
    }
    for (std::size_t c = 0; c < theta.size(); ++c)
      theta[c] -= step_scale * gsum[c];
    total += full_data_loss(problem, theta);
  }
  return total / static_cast<double>(n);
}

namespace {

struct SinkhornTrace {
  Matrix x;  // final doubly stochastic matrix
  std::vector<std::vector<double>> row_sums;  // per round
  std::vector<std::vector<double>> col_sums;  // per round
};

SinkhornTrace sinkhorn_forward(const ScoreMatrix& z, const SinkhornConfig& cfg) {
  const std::size_t n = z.rows;
  SinkhornTrace trace;
  trace.x = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
      row_max = std::max(row_max, z.at(i, j));
    for (std::size_t j = 0; j < n; ++j)
      trace.x.at(i, j) = std::exp((z.at(i, j) - row_max) / cfg.temperature);
  }
  trace.row_sums.resize(cfg.iters, std::vector<double>(n));
  trace.col_sums.resize(cfg.iters, std::vector<double>(n));
  for (int r = 0; r < cfg.iters; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += trace.x.at(i, j);
      trace.row_sums[r][i] = s;
      for (std::size_t j = 0; j < n; ++j) trace.x.at(i, j) /= s;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += trace.x.at(i, j);
      trace.col_sums[r][j] = s;
      for (std::size_t i = 0; i < n; ++i) trace.x.at(i, j) /= s;
    }
  }
  return trace;
}

// Reverse pass through the normalization rounds. Intermediate matrices are
// rebuilt from the stored sums instead of being stored themselves:
// the input of a normalization is its output times the recorded sum.
Matrix sinkhorn_backward(const SinkhornTrace& trace, const SinkhornConfig& cfg,
                         Matrix grad_x) {
  const std::size_t n = trace.x.rows;
  Matrix y = trace.x;
  Matrix& g = grad_x;
  for (int r = cfg.iters - 1; r >= 0; --r) {
    for (std::size_t j = 0; j < n; ++j) {
      const double s = trace.col_sums[r][j];
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += g.at(i, j) * y.at(i, j);
      for (std::size_t i = 0; i < n; ++i) {
        g.at(i, j) = (g.at(i, j) - acc) / s;
        y.at(i, j) *= s;  // rebuild the colnorm input
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double s = trace.row_sums[r][i];
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += g.at(i, j) * y.at(i, j);
      for (std::size_t j = 0; j < n; ++j) {
        g.at(i, j) = (g.at(i, j) - acc) / s;
        y.at(i, j) *= s;  // rebuild the rownorm input (exp matrix)
      }
    }
  }
  // y is now the initial exp matrix; the row-max shift is a constant.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g.at(i, j) *= y.at(i, j) / cfg.temperature;
  return g;
}

// Value of the relaxed objective at X plus its gradient in X, via the
// adjoint of the unrolled training trajectory.
double relaxed_value_and_grad_x(const DoublyStochastic& x,
                                const TeacherStudentProblem& p,
                                Matrix& grad_x) {
  const std::size_t n = p.size();
  const std::size_t d = p.dim();
  const double step_scale = p.eta / static_cast<double>(n);
  const double inv_n = 1.0 / static_cast<double>(n);

  // Forward, storing every theta_t.
  std::vector<std::vector<double>> thetas(n + 1);
  thetas[0] = p.theta0;
  double total = 0.0;
  std::vector<double> gsum(d);
  for (std::size_t t = 0; t < n; ++t) {
    const std::vector<double>& th = thetas[t];
    std::fill(gsum.begin(), gsum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double m = p.y[j] * dot(th, p.x[j]);
      const double coef = x.at(t, j) * (sigmoid(m) - 1.0) * p.y[j];
      for (std::size_t c = 0; c < d; ++c) gsum[c] += coef * p.x[j][c];
    }
    thetas[t + 1] = th;
    for (std::size_t c = 0; c < d; ++c) thetas[t + 1][c] -= step_scale * gsum[c];
    total += full_data_loss(p, thetas[t + 1]);
  }

  // Backward: adjoint a = dL/dtheta_{t+1}, marched down to t = 0.
  grad_x = Matrix(n, n);
  std::vector<double> adjoint(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = p.y[i] * dot(thetas[n], p.x[i]);
    const double coef = inv_n * (sigmoid(m) - 1.0) * p.y[i];
    for (std::size_t c = 0; c < d; ++c) adjoint[c] += coef * p.x[i][c];
  }
  std::vector<double> hsum(d);
  std::vector<double> fprime(d);
  for (std::size_t t = n; t-- > 0;) {
    const std::vector<double>& th = thetas[t];
    std::fill(hsum.begin(), hsum.end(), 0.0);
    std::fill(fprime.begin(), fprime.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double m = p.y[j] * dot(th, p.x[j]);
      const double sig = sigmoid(m);
      const double coef = (sig - 1.0) * p.y[j];  // u_j = coef * x_j
      const double xa = dot(p.x[j], adjoint);
      grad_x.at(t, j) = -p.eta * inv_n * coef * xa;
      const double curv = x.at(t, j) * sig * (1.0 - sig);  // Hessian weight
      for (std::size_t c = 0; c < d; ++c) {
        hsum[c] += curv * xa * p.x[j][c];
        fprime[c] += coef * p.x[j][c];
      }
    }
    if (t > 0) {
      for (std::size_t c = 0; c < d; ++c)
        adjoint[c] += inv_n * fprime[c] - step_scale * hsum[c];
    }
  }
  return total * inv_n;
}

}  // namespace

double relaxed_objective_and_gradient(const ScoreMatrix& z,
                                      const TeacherStudentProblem& problem,
                                      const SinkhornConfig& cfg,
                                      Matrix& grad_out) {
  problem.validate();
  if (z.rows != problem.size() || z.cols != problem.size())
    throw Error(ErrorCode::dimension, "score matrix dimension mismatch");
  SinkhornTrace trace = sinkhorn_forward(z, cfg);
  Matrix grad_x;
  double value = relaxed_value_and_grad_x(trace.x, problem, grad_x);
  grad_out = sinkhorn_backward(trace, cfg, std::move(grad_x));
  return value;
}

MetaOptResult meta_optimize(const TeacherStudentProblem& problem,
                            const ScoreMatrix& z0, int meta_steps,
                            double meta_lr, const SinkhornConfig& cfg,
                            bool keep_z_trajectory) {
  problem.validate();
  if (z0.rows != problem.size() || z0.cols != problem.size())
    throw Error(ErrorCode::dimension, "score matrix dimension mismatch");
  if (problem.size() > 32)
    throw Error(ErrorCode::domain,
                "meta optimization is limited to N <= 32");
  if (meta_steps < 0)
    throw Error(ErrorCode::domain, "meta_steps must be >= 0");

  MetaOptResult result;
  ScoreMatrix z = z0;
  if (keep_z_trajectory) result.z_trajectory.push_back(z);
  double initial = std::numeric_limits<double>::quiet_NaN();
  Matrix grad;
  for (int step = 0; step < meta_steps; ++step) {
    double value = relaxed_objective_and_gradient(z, problem, cfg, grad);
    if (std::isnan(initial)) initial = value;
    if (!std::isfinite(value) || value > 10.0 * initial)
      throw Error(ErrorCode::run,
                  "meta optimization diverged at step " +
                      std::to_string(step) + ": objective " +
                      std::to_string(value) + " vs initial " +
                      std::to_string(initial));
    result.objective_trajectory.push_back(value);
    for (std::size_t i = 0; i < z.data.size(); ++i)
      z.data[i] -= meta_lr * grad.data[i];
    if (keep_z_trajectory) result.z_trajectory.push_back(z);
  }
  // Closing evaluation so the trajectory covers the final Z as well.
  result.objective_trajectory.push_back(
      meta_objective_relaxed(sinkhorn(z, cfg.temperature, cfg.iters), problem));
  result.z_final = std::move(z);
  return result;
}

namespace {

// Exact min-cost linear assignment (shortest augmenting paths).
// Returns the column assigned to each row.
std::vector<int> lap_min(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows);
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost.at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> rowsol(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) rowsol[p[j] - 1] = j - 1;
  return rowsol;
}

double assignment_value(const Matrix& cost, const std::vector<int>& rowsol) {
  double total = 0.0;
  for (std::size_t i = 0; i < cost.rows; ++i)
    total += cost.at(i, static_cast<std::size_t>(rowsol[i]));
  return total;
}

// Min assignment value over the submatrix of rows >= row_from and the
// columns not yet taken.
double restricted_lap_value(const Matrix& cost, std::size_t row_from,
                            const std::vector<char>& col_taken) {
  const std::size_t n = cost.rows;
  if (row_from >= n) return 0.0;
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < n; ++j)
    if (!col_taken[j]) cols.push_back(j);
  const std::size_t m = n - row_from;
  Matrix sub(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      sub.at(i, j) = cost.at(row_from + i, cols[j]);
  return assignment_value(sub, lap_min(sub));
}

}  // namespace

Permutation project_to_permutation(const ScoreMatrix& z) {
  if (z.rows != z.cols || z.rows == 0)
    throw Error(ErrorCode::dimension,
                "permutation projection needs a square matrix");
  for (double v : z.data)
    if (!std::isfinite(v))
      throw Error(ErrorCode::domain, "projection input must be finite");

  const std::size_t n = z.rows;
  Matrix cost(n, n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n * n; ++i) {
    cost.data[i] = -z.data[i];
    scale = std::max(scale, std::abs(z.data[i]));
  }
  const double best = assignment_value(cost, lap_min(cost));
  const double tol = 1e-9 * (1.0 + scale * static_cast<double>(n));

  // Fix rows in order to the smallest column that still admits an optimal
  // completion; on exact ties this yields the lexicographically smallest
  // optimal permutation.
  Permutation sigma(n);
  std::vector<char> col_taken(n, 0);
  double pinned = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    bool placed = false;
    for (std::size_t c = 0; c < n && !placed; ++c) {
      if (col_taken[c]) continue;
      col_taken[c] = 1;
      double completion = pinned + cost.at(i, c) +
                          restricted_lap_value(cost, i + 1, col_taken);
      if (completion <= best + tol) {
        sigma[i] = c;
        pinned += cost.at(i, c);
        placed = true;
      } else {
        col_taken[c] = 0;
      }
    }
    if (!placed)
      throw Error(ErrorCode::run, "assignment refinement failed");
  }
  return sigma;
}

}  // namespace ado
