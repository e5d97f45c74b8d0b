#include "sparsecurve/admm.hpp"

#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "sparsecurve/errors.hpp"

namespace sparsecurve {

namespace {

constexpr double kLiftEps = 1e-10;
// Reciprocal condition estimate below which the hybrid KKT factorization is
// treated as singular.
constexpr double kMinRcond = 1e-14;

void require_finite(const Eigen::Ref<const Eigen::VectorXd>& v, const char* what) {
  if (!v.allFinite()) throw UsageError(std::string(what) + " contains non-finite values");
}

void require_lambda(double lambda, const char* what) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw UsageError(std::string(what) + " must be a positive finite number");
  }
}

Eigen::MatrixX2d stack_points(const Eigen::Ref<const Eigen::VectorXd>& px,
                              const Eigen::Ref<const Eigen::VectorXd>& py, int expected_rows) {
  if (px.size() != expected_rows || py.size() != expected_rows) {
    throw UsageError("expected " + std::to_string(expected_rows) + " data points per coordinate, got " +
                     std::to_string(px.size()) + " and " + std::to_string(py.size()));
  }
  require_finite(px, "p_x");
  require_finite(py, "p_y");
  Eigen::MatrixX2d p(expected_rows, 2);
  p.col(0) = px;
  p.col(1) = py;
  return p;
}

// A contiguous row range of the split variable w = L c with its own weight.
struct PenaltyBlock {
  Eigen::Index offset;
  Eigen::Index rows;
  double lambda;
};

// Everything the iteration needs from a concrete problem.
struct Problem {
  Eigen::Index num_coeff_rows;  // rows of c (N single, 2N hybrid)
  std::vector<PenaltyBlock> blocks;
  std::function<Eigen::MatrixX2d(const Eigen::MatrixX2d&)> apply_l;
  std::function<Eigen::MatrixX2d(const Eigen::MatrixX2d&)> apply_lt;
  // Solves the c-update for a given right-hand side rho L^T (z - u); the
  // data part of the rhs is folded in by the problem.
  std::function<Eigen::MatrixX2d(const Eigen::MatrixX2d&)> c_update;
};

Eigen::MatrixX2d threshold(Regularizer kind, const Eigen::Ref<const Eigen::MatrixX2d>& v,
                           double kappa) {
  return kind == Regularizer::GroupL2 ? group_soft_threshold(v, kappa)
                                      : elementwise_soft_threshold(v, kappa);
}

struct IterationOutcome {
  Eigen::MatrixX2d c;
  AdmmState state;
  bool converged = false;
};

IterationOutcome iterate(const Problem& problem, const AdmmConfig& cfg) {
  const Eigen::Index w_rows = problem.blocks.back().offset + problem.blocks.back().rows;
  Eigen::MatrixX2d c = Eigen::MatrixX2d::Zero(problem.num_coeff_rows, 2);
  Eigen::MatrixX2d z = Eigen::MatrixX2d::Zero(w_rows, 2);
  Eigen::MatrixX2d u = Eigen::MatrixX2d::Zero(w_rows, 2);
  const double sqrt_p = std::sqrt(static_cast<double>(2 * w_rows));
  const double sqrt_n = std::sqrt(static_cast<double>(2 * problem.num_coeff_rows));

  IterationOutcome out;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    c = problem.c_update(cfg.rho * problem.apply_lt(z - u));
    const Eigen::MatrixX2d lc = problem.apply_l(c);

    const Eigen::MatrixX2d z_prev = z;
    const Eigen::MatrixX2d v = lc + u;
    for (const auto& b : problem.blocks) {
      z.middleRows(b.offset, b.rows) =
          threshold(cfg.regularizer, v.middleRows(b.offset, b.rows), b.lambda / cfg.rho);
    }
    u += lc - z;

    const double r_primal = (lc - z).norm();
    const double r_dual = cfg.rho * problem.apply_lt(z - z_prev).norm();
    const double eps_primal = sqrt_p * cfg.tol_abs + cfg.tol_rel * std::max(lc.norm(), z.norm());
    const double eps_dual = sqrt_n * cfg.tol_abs + cfg.tol_rel * cfg.rho * problem.apply_lt(u).norm();

    out.state.iter = it;
    out.state.r_primal = r_primal;
    out.state.r_dual = r_dual;
    if (r_primal <= eps_primal && r_dual <= eps_dual) {
      out.converged = true;
      break;
    }
  }
  out.c = c;
  for (const auto& b : problem.blocks) {
    out.state.z.emplace_back(z.middleRows(b.offset, b.rows));
    out.state.u.emplace_back(u.middleRows(b.offset, b.rows));
  }
  return out;
}

// Cholesky of an SPD matrix with one lifted retry.
Eigen::LLT<Eigen::MatrixXd> factorize_spd(Eigen::MatrixXd g) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() == Eigen::Success && llt.matrixLLT().allFinite()) return llt;
  g.diagonal().array() += kLiftEps * g.trace();
  llt.compute(g);
  if (llt.info() != Eigen::Success || !llt.matrixLLT().allFinite()) {
    throw NumericalError("c-update system is singular even after diagonal lift");
  }
  return llt;
}

Eigen::MatrixXd kkt_matrix(const Eigen::MatrixXd& g, const Eigen::RowVectorXd& a) {
  const Eigen::Index n = g.rows();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + 1, n + 1);
  k.topLeftCorner(n, n) = g;
  k.block(0, n, n, 1) = a.transpose();
  k.block(n, 0, 1, n) = a;
  return k;
}

Eigen::PartialPivLU<Eigen::MatrixXd> factorize_kkt(const Eigen::MatrixXd& g,
                                                   const Eigen::RowVectorXd& a) {
  auto usable = [](const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
    return lu.matrixLU().allFinite() && lu.rcond() > kMinRcond;
  };
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(kkt_matrix(g, a));
  if (usable(lu)) return lu;
  Eigen::MatrixXd lifted = g;
  lifted.diagonal().array() += kLiftEps * g.trace();
  lu.compute(kkt_matrix(lifted, a));
  if (!usable(lu)) {
    throw NumericalError("hybrid KKT system is singular even after diagonal lift");
  }
  return lu;
}

SolveResult finish(IterationOutcome&& run, double data_term, std::vector<double> penalties,
                   const std::vector<double>& lambdas) {
  SolveResult result;
  result.data_term = data_term;
  result.objective = data_term;
  for (std::size_t i = 0; i < penalties.size(); ++i) result.objective += lambdas[i] * penalties[i];
  result.penalty_terms = std::move(penalties);
  result.iterations = run.state.iter;
  result.converged = run.converged;
  result.r_primal = run.state.r_primal;
  result.r_dual = run.state.r_dual;
  result.state = std::move(run.state);
  return result;
}

}  // namespace

void AdmmConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("ADMM rho must be positive");
  if (!(tol_abs > 0.0) || !(tol_rel > 0.0)) throw ConfigError("ADMM tolerances must be positive");
  if (max_iters < 1) throw ConfigError("ADMM max_iters must be at least 1");
}

Eigen::MatrixX2d group_soft_threshold(const Eigen::Ref<const Eigen::MatrixX2d>& rows,
                                      double kappa) {
  Eigen::MatrixX2d out(rows.rows(), 2);
  for (Eigen::Index n = 0; n < rows.rows(); ++n) {
    const double norm = rows.row(n).norm();
    const double gain = norm > kappa ? 1.0 - kappa / norm : 0.0;
    out.row(n) = gain * rows.row(n);
  }
  return out;
}

Eigen::MatrixX2d elementwise_soft_threshold(const Eigen::Ref<const Eigen::MatrixX2d>& rows,
                                            double kappa) {
  return rows.unaryExpr([kappa](double x) {
    const double mag = std::abs(x) - kappa;
    return mag > 0.0 ? std::copysign(mag, x) : 0.0;
  });
}

double regularizer_value(Regularizer kind, const Eigen::Ref<const Eigen::MatrixX2d>& block) {
  return kind == Regularizer::GroupL2 ? group_l1l2_norm(block.col(0), block.col(1))
                                      : separable_l1_norm(block.col(0), block.col(1));
}

SolveResult solve_single(const SystemMatrix& h, const RegMatrix& l,
                         const Eigen::Ref<const Eigen::VectorXd>& px,
                         const Eigen::Ref<const Eigen::VectorXd>& py, double lambda,
                         const AdmmConfig& cfg) {
  cfg.validate();
  require_lambda(lambda, "lambda");
  if (h.cols() != l.size()) {
    throw UsageError("system matrix has " + std::to_string(h.cols()) +
                     " columns but regularization matrix is " + std::to_string(l.size()) + "x" +
                     std::to_string(l.size()));
  }
  const Eigen::MatrixX2d p = stack_points(px, py, h.rows());

  const Eigen::MatrixXd hd = h.dense();
  const Eigen::MatrixXd ld = l.dense();
  const Eigen::MatrixXd g = 2.0 * hd.transpose() * hd + cfg.rho * ld.transpose() * ld;
  const auto llt = factorize_spd(g);
  const Eigen::MatrixX2d data_rhs = 2.0 * h.apply_transpose(p);

  Problem problem;
  problem.num_coeff_rows = l.size();
  problem.blocks = {{0, l.size(), lambda}};
  problem.apply_l = [&l](const Eigen::MatrixX2d& c) { return Eigen::MatrixX2d(l.apply(c)); };
  problem.apply_lt = [&l](const Eigen::MatrixX2d& w) {
    return Eigen::MatrixX2d(l.apply_transpose(w));
  };
  problem.c_update = [&](const Eigen::MatrixX2d& penalty_rhs) {
    return Eigen::MatrixX2d(llt.solve(data_rhs + penalty_rhs));
  };

  IterationOutcome run = iterate(problem, cfg);
  const Eigen::MatrixX2d c = run.c;
  const double data_term = (h.apply(c) - p).squaredNorm();
  const double penalty = regularizer_value(cfg.regularizer, l.apply(c));
  SolveResult result = finish(std::move(run), data_term, {penalty}, {lambda});
  result.coefficients = {CoefficientPair::from_block(c)};
  return result;
}

SolveResult solve_hybrid(const SystemMatrix& h1, const SystemMatrix& h2, const RegMatrix& l1,
                         const RegMatrix& l2, const ConstraintRows& constraint,
                         const Eigen::Ref<const Eigen::VectorXd>& px,
                         const Eigen::Ref<const Eigen::VectorXd>& py, double lambda1,
                         double lambda2, const AdmmConfig& cfg) {
  cfg.validate();
  require_lambda(lambda1, "lambda1");
  require_lambda(lambda2, "lambda2");
  const SplineSpace& s1 = h1.space();
  const SplineSpace& s2 = h2.space();
  if (s1.period() != s2.period() || s1.num_coeffs() != s2.num_coeffs()) {
    throw UsageError("hybrid components must share the period M and coefficient count N");
  }
  if (!(s1.degree() < s2.degree())) {
    throw UsageError("hybrid components need degree1 < degree2");
  }
  if (l1.space() != s1 || l2.space() != s2) {
    throw UsageError("regularization matrices do not match the system matrices");
  }
  const Eigen::Index n = s1.num_coeffs();
  if (constraint.x.size() != n || constraint.y.size() != n) {
    throw UsageError("constraint rows must have length N");
  }
  if ((constraint.x.array() == 0.0).all() || (constraint.y.array() == 0.0).all()) {
    throw ConfigError("hybrid constraint row is identically zero");
  }
  if (!constraint.x.isApprox(constraint.y)) {
    // x and y share one factorization, which requires a common row.
    throw UsageError("hybrid constraint rows for x and y must coincide");
  }
  const Eigen::MatrixX2d p = stack_points(px, py, s1.period());

  Eigen::MatrixXd a_tilde(s1.period(), 2 * n);
  a_tilde << h1.dense(), h2.dense();
  Eigen::MatrixXd l_block = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  l_block.topLeftCorner(n, n) = l1.dense();
  l_block.bottomRightCorner(n, n) = l2.dense();
  const Eigen::MatrixXd g =
      2.0 * a_tilde.transpose() * a_tilde + cfg.rho * l_block.transpose() * l_block;
  Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(2 * n);
  a.head(n) = constraint.x;
  const auto lu = factorize_kkt(g, a);
  const Eigen::MatrixXd kkt = kkt_matrix(g, a);
  const Eigen::MatrixX2d data_rhs = 2.0 * a_tilde.transpose() * p;

  Eigen::Vector2d multipliers = Eigen::Vector2d::Zero();
  auto split_apply = [n](const RegMatrix& top, const RegMatrix& bottom, bool transpose) {
    return [&top, &bottom, n, transpose](const Eigen::MatrixX2d& v) {
      Eigen::MatrixX2d out(2 * n, 2);
      out.topRows(n) = transpose ? top.apply_transpose(v.topRows(n)) : top.apply(v.topRows(n));
      out.bottomRows(n) =
          transpose ? bottom.apply_transpose(v.bottomRows(n)) : bottom.apply(v.bottomRows(n));
      return out;
    };
  };

  Problem problem;
  problem.num_coeff_rows = 2 * n;
  problem.blocks = {{0, n, lambda1}, {n, n, lambda2}};
  problem.apply_l = split_apply(l1, l2, false);
  problem.apply_lt = split_apply(l1, l2, true);
  problem.c_update = [&](const Eigen::MatrixX2d& penalty_rhs) {
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(2 * n + 1, 2);
    rhs.topRows(2 * n) = data_rhs + penalty_rhs;
    Eigen::MatrixXd sol = lu.solve(rhs);
    sol += lu.solve(rhs - kkt * sol);  // one step of iterative refinement
    multipliers = sol.row(2 * n).transpose();
    return Eigen::MatrixX2d(sol.topRows(2 * n));
  };

  IterationOutcome run = iterate(problem, cfg);
  run.state.lagrange_mults = multipliers;
  const Eigen::MatrixX2d c = run.c;
  const double data_term = (a_tilde * c - p).squaredNorm();
  const double penalty1 = regularizer_value(cfg.regularizer, l1.apply(c.topRows(n)));
  const double penalty2 = regularizer_value(cfg.regularizer, l2.apply(c.bottomRows(n)));
  SolveResult result = finish(std::move(run), data_term, {penalty1, penalty2}, {lambda1, lambda2});
  result.coefficients = {CoefficientPair::from_block(c.topRows(n)),
                         CoefficientPair::from_block(c.bottomRows(n))};
  return result;
}

}  // namespace sparsecurve
