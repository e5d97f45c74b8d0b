#include "sparsecurve/curvefit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "sparsecurve/errors.hpp"

namespace sparsecurve {

namespace {

// Rows of L c below this multiple of the coefficient magnitude are round-off.
constexpr double kRoundoffFloor = 1e-10;

void check_block(const SplineBlock& block) {
  if (block.coeffs.size() != block.space.num_coeffs()) {
    throw UsageError("coefficient arrays have length " + std::to_string(block.coeffs.size()) +
                     " but the spline space has N = " + std::to_string(block.space.num_coeffs()));
  }
}

FitReport make_report(const CurveModel& model, const ContourPoints& points,
                      const SolveResult& solve, double knot_eps) {
  FitReport report;
  report.qfe = qfe(model, points);
  report.knots = extract_knots(model, knot_eps);
  report.knot_eps = knot_eps;
  report.knots_per_block.assign(model.blocks().size(), 0);
  for (const auto& k : report.knots) ++report.knots_per_block[k.block - 1];
  report.num_knots = static_cast<int>(report.knots.size());
  report.objective = solve.objective;
  report.data_term = solve.data_term;
  report.penalty_terms = solve.penalty_terms;
  report.iterations = solve.iterations;
  report.converged = solve.converged;
  report.r_primal = solve.r_primal;
  report.r_dual = solve.r_dual;
  return report;
}

}  // namespace

CurveModel::CurveModel(ModelKind kind, std::vector<SplineBlock> blocks)
    : kind_(kind), blocks_(std::move(blocks)) {}

CurveModel CurveModel::single(SplineSpace space, CoefficientPair coeffs) {
  SplineBlock block{space, std::move(coeffs)};
  check_block(block);
  return CurveModel(ModelKind::Single, {std::move(block)});
}

CurveModel CurveModel::hybrid(SplineBlock rough, SplineBlock smooth) {
  check_block(rough);
  check_block(smooth);
  if (rough.space.period() != smooth.space.period() ||
      rough.space.num_coeffs() != smooth.space.num_coeffs()) {
    throw UsageError("hybrid blocks must share the period M and coefficient count N");
  }
  if (!(rough.space.degree() < smooth.space.degree())) {
    throw UsageError("hybrid blocks need degree1 < degree2");
  }
  CurveModel model(ModelKind::Hybrid, {std::move(rough), std::move(smooth)});
  const Point2 pin = model.eval_block(0, 0.0);
  if (std::abs(pin.x) > kHybridPinTolerance || std::abs(pin.y) > kHybridPinTolerance) {
    throw UsageError("hybrid model violates r_1(0) = 0 (|x_1(0)| = " + std::to_string(std::abs(pin.x)) +
                     ", |y_1(0)| = " + std::to_string(std::abs(pin.y)) + ")");
  }
  return model;
}

Point2 CurveModel::eval_block(std::size_t block, double t) const {
  const SplineBlock& b = blocks_.at(block);
  return {eval_spline(b.space, b.coeffs.cx, t), eval_spline(b.space, b.coeffs.cy, t)};
}

Point2 CurveModel::eval(double t) const {
  Point2 r;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const Point2 part = eval_block(b, t);
    r.x += part.x;
    r.y += part.y;
  }
  return r;
}

FitResult fit_single(const ContourPoints& points, Degree alpha, int num_coeffs, double lambda,
                     const FitOptions& options) {
  if (!(options.knot_eps >= 0.0)) throw UsageError("knot epsilon must be non-negative");
  const SplineSpace space(alpha, points.size(), num_coeffs);
  const SystemMatrix h = build_system_matrix(space);
  const RegMatrix l = build_reg_matrix(space);
  SolveResult solve = solve_single(h, l, points.xs(), points.ys(), lambda, options.admm);
  CurveModel model = CurveModel::single(space, std::move(solve.coefficients.front()));
  FitReport report = make_report(model, points, solve, options.knot_eps);
  return {std::move(model), std::move(report)};
}

FitResult fit_hybrid(const ContourPoints& points, Degree alpha1, Degree alpha2, int num_coeffs,
                     double lambda1, double lambda2, const FitOptions& options) {
  if (!(alpha1 < alpha2)) {
    throw UsageError("hybrid fit needs degree1 < degree2 (got " + std::to_string(alpha1.value()) +
                     " and " + std::to_string(alpha2.value()) + ")");
  }
  if (!(options.knot_eps >= 0.0)) throw UsageError("knot epsilon must be non-negative");
  const SplineSpace space1(alpha1, points.size(), num_coeffs);
  const SplineSpace space2(alpha2, points.size(), num_coeffs);
  const SystemMatrix h1 = build_system_matrix(space1);
  const SystemMatrix h2 = build_system_matrix(space2);
  const RegMatrix l1 = build_reg_matrix(space1);
  const RegMatrix l2 = build_reg_matrix(space2);
  SolveResult solve = solve_hybrid(h1, h2, l1, l2, build_constraint_rows(space1), points.xs(),
                                   points.ys(), lambda1, lambda2, options.admm);
  CurveModel model = CurveModel::hybrid({space1, std::move(solve.coefficients[0])},
                                        {space2, std::move(solve.coefficients[1])});
  FitReport report = make_report(model, points, solve, options.knot_eps);
  return {std::move(model), std::move(report)};
}

std::vector<CurveSample> sample_curve(const CurveModel& model, int samples_per_unit) {
  if (samples_per_unit < 1) throw UsageError("samples_per_unit must be at least 1");
  const long count = static_cast<long>(model.period()) * samples_per_unit;
  std::vector<CurveSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long j = 0; j < count; ++j) {
    const double t = static_cast<double>(j) / samples_per_unit;
    const Point2 r = model.eval(t);
    out.push_back({t, r.x, r.y});
  }
  return out;
}

double qfe(const CurveModel& model, const ContourPoints& points) {
  if (model.period() != points.size()) {
    throw UsageError("model period " + std::to_string(model.period()) + " does not match " +
                     std::to_string(points.size()) + " contour points");
  }
  double acc = 0.0;
  for (int m = 0; m < points.size(); ++m) {
    const Point2 r = model.eval(m);
    const double dx = r.x - points[m].x;
    const double dy = r.y - points[m].y;
    acc += dx * dx + dy * dy;
  }
  return acc / points.size();
}

KnotList extract_knots(const CurveModel& model, double epsilon) {
  if (!(epsilon >= 0.0)) throw UsageError("knot epsilon must be non-negative");
  struct BlockRows {
    Eigen::MatrixX2d rows;
    Eigen::VectorXd norms;
    double floor;
  };
  std::vector<BlockRows> per_block;
  double max_norm = 0.0;
  for (const auto& block : model.blocks()) {
    const RegMatrix l(block.space);
    BlockRows br;
    br.rows = l.apply(block.coeffs.as_block());
    br.norms = br.rows.rowwise().norm();
    const double coeff_mag = block.coeffs.as_block().cwiseAbs().maxCoeff();
    br.floor = kRoundoffFloor * l.scale() * coeff_mag;
    max_norm = std::max(max_norm, br.norms.maxCoeff());
    per_block.push_back(std::move(br));
  }

  KnotList knots;
  for (std::size_t b = 0; b < per_block.size(); ++b) {
    const SplineSpace& space = model.blocks()[b].space;
    const double threshold = std::max(epsilon * max_norm, per_block[b].floor);
    const double offset = support_radius(space.degree());
    const auto first = knots.size();
    for (Eigen::Index n = 0; n < per_block[b].norms.size(); ++n) {
      if (!(per_block[b].norms[n] > threshold)) continue;
      double t = std::fmod((static_cast<double>(n) - offset) * space.step(), space.period());
      if (t < 0.0) t += space.period();
      knots.push_back({t, per_block[b].rows(n, 0), per_block[b].rows(n, 1), static_cast<int>(b) + 1});
    }
    std::sort(knots.begin() + static_cast<long>(first), knots.end(),
              [](const Knot& a, const Knot& c) { return a.location < c.location; });
  }
  return knots;
}

ContourPoints add_noise(const ContourPoints& points, double snr_db, std::uint64_t seed) {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw UsageError("SNR must be finite or +inf (no noise)");
  }
  if (std::isinf(snr_db)) return points;
  const double signal_power = points.centroid_variance();
  const double sigma = std::sqrt(signal_power / std::pow(10.0, snr_db / 10.0) / 2.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  std::vector<Point2> noisy;
  noisy.reserve(points.points().size());
  for (const auto& p : points.points()) {
    const double nx = gauss(rng);
    const double ny = gauss(rng);
    noisy.push_back({p.x + nx, p.y + ny});
  }
  return ContourPoints(std::move(noisy));
}

}  // namespace sparsecurve
