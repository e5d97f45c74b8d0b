#pragma once

// ADMM for the group-sparse spline fitting problems
//
//   single:  min_c  ||H c_x - p_x||^2 + ||H c_y - p_y||^2 + lambda R(L [c_x c_y])
//   hybrid:  min_c  ||H1 c1 + H2 c2 - p||^2 (per coordinate)
//                   + lambda1 R(L1 c1) + lambda2 R(L2 c2)
//            s.t.   x_1(0) = y_1(0) = 0
//
// with R the l1-l2 group norm (rotation invariant) or the separable l1 norm.
// Scaled-dual form with the split w = L c:
//
//   c <- argmin  data(c) + rho/2 ||L c - z + u||^2   (one factorization, reused)
//   z <- prox_{R, lambda/rho}(L c + u)
//   u <- u + L c - z
//
// All variables start at zero, so a solve is a deterministic function of its
// inputs.

#include <vector>

#include <Eigen/Core>

#include "sparsecurve/operators.hpp"

namespace sparsecurve {

enum class Regularizer {
  GroupL2,      ///< l1-l2 group norm over (x, y) rows, rotation invariant
  SeparableL1,  ///< l1 norm of both columns, components uncoupled
};

struct AdmmConfig {
  double rho = 1.0;
  int max_iters = 10000;
  double tol_abs = 1e-6;
  double tol_rel = 1e-4;
  Regularizer regularizer = Regularizer::GroupL2;

  /// Throws UsageError unless rho > 0, tolerances > 0 and max_iters >= 1.
  void validate() const;
};

/// Row-wise shrinkage v <- v max(0, 1 - kappa / ||v||_2); zero rows stay zero.
[[nodiscard]] Eigen::MatrixX2d group_soft_threshold(const Eigen::Ref<const Eigen::MatrixX2d>& rows,
                                                    double kappa);
/// Entry-wise shrinkage x <- sign(x) max(0, |x| - kappa).
[[nodiscard]] Eigen::MatrixX2d elementwise_soft_threshold(
    const Eigen::Ref<const Eigen::MatrixX2d>& rows, double kappa);

/// Value of the configured regularizer on an N x 2 block.
[[nodiscard]] double regularizer_value(Regularizer kind,
                                       const Eigen::Ref<const Eigen::MatrixX2d>& block);

/// Final ADMM iterate: one z / u block per regularized component and, for
/// hybrid problems, the multipliers of the two equality constraints.
struct AdmmState {
  std::vector<Eigen::MatrixX2d> z;
  std::vector<Eigen::MatrixX2d> u;
  Eigen::Vector2d lagrange_mults = Eigen::Vector2d::Zero();
  int iter = 0;
  double r_primal = 0.0;
  double r_dual = 0.0;
};

struct SolveResult {
  /// One pair for single problems, two (rough, smooth) for hybrid ones.
  std::vector<CoefficientPair> coefficients;
  /// data_term + sum_i lambda_i * penalty_terms[i], recomputed from
  /// `coefficients` at exit.
  double objective = 0.0;
  double data_term = 0.0;
  /// Unweighted R(L_i c_i).
  std::vector<double> penalty_terms;
  int iterations = 0;
  bool converged = false;
  double r_primal = 0.0;
  double r_dual = 0.0;
  AdmmState state;
};

/// Throws UsageError on shape mismatch, non-finite data or lambda <= 0, and
/// NumericalError when the c-update system cannot be factorized even after a
/// 1e-10 * trace diagonal lift.
[[nodiscard]] SolveResult solve_single(const SystemMatrix& h, const RegMatrix& l,
                                       const Eigen::Ref<const Eigen::VectorXd>& px,
                                       const Eigen::Ref<const Eigen::VectorXd>& py, double lambda,
                                       const AdmmConfig& cfg);

/// Both spaces must share M and N, with degree1 < degree2. Throws ConfigError
/// for an all-zero constraint row, otherwise as solve_single.
[[nodiscard]] SolveResult solve_hybrid(const SystemMatrix& h1, const SystemMatrix& h2,
                                       const RegMatrix& l1, const RegMatrix& l2,
                                       const ConstraintRows& constraint,
                                       const Eigen::Ref<const Eigen::VectorXd>& px,
                                       const Eigen::Ref<const Eigen::VectorXd>& py,
                                       double lambda1, double lambda2, const AdmmConfig& cfg);

}  // namespace sparsecurve
