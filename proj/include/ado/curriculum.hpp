#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "ado/rng.hpp"

namespace ado {

// Small dense row-major matrix; everything here is desk scale (N <= 32).
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

using ScoreMatrix = Matrix;       // unconstrained curriculum scores Z
using DoublyStochastic = Matrix;  // rows and columns sum to 1
using Permutation = std::vector<std::size_t>;  // sigma[t] = example index

struct SinkhornConfig {
  double temperature = 1.0;
  int iters = 200;
};

// exp(Z/temperature) with per-row max subtraction, then `iters` rounds of
// row normalization followed by column normalization.
DoublyStochastic sinkhorn(const ScoreMatrix& z, double temperature, int iters);

bool is_doubly_stochastic(const Matrix& x, double tol);

// Binary teacher-student logistic regression: labels in {-1,+1} are the
// teacher's sign outputs on the inputs.
struct TeacherStudentProblem {
  std::vector<std::vector<double>> x;  // N x d inputs
  std::vector<double> y;               // +-1 labels
  std::vector<double> theta0;          // student init
  double eta = 0.5;                    // SGD step size

  std::size_t size() const { return x.size(); }
  std::size_t dim() const { return theta0.size(); }
  void validate() const;
};

TeacherStudentProblem make_teacher_student(std::size_t n, std::size_t d,
                                           double eta, double init_scale,
                                           Rng& rng);

// Mean over steps of the full-data loss after each single-example SGD
// update theta <- theta - eta * grad l(z_sigma(t)).
double meta_objective_perm(const Permutation& sigma,
                           const TeacherStudentProblem& problem);

// Relaxed variant: step t applies eta * (1/N) * sum_j X[t][j] grad l(z_j).
// At a permutation matrix this equals meta_objective_perm run with step
// size eta/N.
double meta_objective_relaxed(const DoublyStochastic& x,
                              const TeacherStudentProblem& problem);

// Value plus analytic gradient of meta_objective_relaxed(sinkhorn(Z)) in Z.
double relaxed_objective_and_gradient(const ScoreMatrix& z,
                                      const TeacherStudentProblem& problem,
                                      const SinkhornConfig& cfg,
                                      Matrix& grad_out);

struct MetaOptResult {
  std::vector<ScoreMatrix> z_trajectory;  // includes the initial Z
  std::vector<double> objective_trajectory;
  ScoreMatrix z_final;
};

// Gradient descent on Z against the relaxed objective. Aborts when the
// objective exceeds 10x its initial value.
MetaOptResult meta_optimize(const TeacherStudentProblem& problem,
                            const ScoreMatrix& z0, int meta_steps,
                            double meta_lr, const SinkhornConfig& cfg,
                            bool keep_z_trajectory = false);

// argmax over permutation matrices P of <Z, P>, solved exactly; ties are
// broken toward the lexicographically smallest permutation.
Permutation project_to_permutation(const ScoreMatrix& z);

}  // namespace ado
