#pragma once

// High-level fitting API: build the spline spaces and operators for a contour,
// run the solver, and package the resulting curve with its report.

#include <cstdint>
#include <optional>
#include <vector>

#include "sparsecurve/admm.hpp"
#include "sparsecurve/bspline.hpp"
#include "sparsecurve/geometry.hpp"
#include "sparsecurve/operators.hpp"

namespace sparsecurve {

inline constexpr double kDefaultKnotEps = 1e-4;
/// Largest |x_1(0)|, |y_1(0)| a hybrid model may carry.
inline constexpr double kHybridPinTolerance = 1e-8;

struct SplineBlock {
  SplineSpace space;
  CoefficientPair coeffs;
};

enum class ModelKind { Single, Hybrid };

/// r(t) = sum over blocks of sum_n c[n] phi_M(t - n h).
class CurveModel {
 public:
  /// Throws UsageError if the coefficient count differs from N.
  static CurveModel single(SplineSpace space, CoefficientPair coeffs);
  /// Throws UsageError unless both blocks share M and N, degree1 < degree2
  /// and |r_1(0)| <= kHybridPinTolerance componentwise.
  static CurveModel hybrid(SplineBlock rough, SplineBlock smooth);

  [[nodiscard]] ModelKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::vector<SplineBlock>& blocks() const noexcept { return blocks_; }
  [[nodiscard]] int period() const noexcept { return blocks_.front().space.period(); }

  [[nodiscard]] Point2 eval(double t) const;
  [[nodiscard]] Point2 eval_block(std::size_t block, double t) const;

 private:
  CurveModel(ModelKind kind, std::vector<SplineBlock> blocks);

  ModelKind kind_;
  std::vector<SplineBlock> blocks_;
};

struct Knot {
  double location = 0.0;  ///< t in [0, M)
  double ax = 0.0;        ///< jump amplitude of D^(alpha+1) x
  double ay = 0.0;
  int block = 1;  ///< 1-based block index
};

using KnotList = std::vector<Knot>;

struct FitReport {
  double qfe = 0.0;
  KnotList knots;
  int num_knots = 0;                 ///< K, total over blocks
  std::vector<int> knots_per_block;  ///< K_1 (, K_2)
  double knot_eps = kDefaultKnotEps;
  double objective = 0.0;
  double data_term = 0.0;
  std::vector<double> penalty_terms;
  int iterations = 0;
  bool converged = false;
  double r_primal = 0.0;
  double r_dual = 0.0;
};

struct FitOptions {
  AdmmConfig admm;
  double knot_eps = kDefaultKnotEps;
};

struct FitResult {
  CurveModel model;
  FitReport report;
};

/// Fit one spline curve of degree alpha with N coefficients to the contour.
/// Throws UsageError for lambda <= 0 and ConfigError for N < alpha + 2.
[[nodiscard]] FitResult fit_single(const ContourPoints& points, Degree alpha, int num_coeffs,
                                   double lambda, const FitOptions& options = {});

/// Fit r = r_1 + r_2 with degrees alpha1 < alpha2 on a shared grid, pinned by
/// r_1(0) = 0. Throws UsageError unless alpha1 < alpha2, ConfigError unless
/// N >= alpha2 + 2.
[[nodiscard]] FitResult fit_hybrid(const ContourPoints& points, Degree alpha1, Degree alpha2,
                                   int num_coeffs, double lambda1, double lambda2,
                                   const FitOptions& options = {});

struct CurveSample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// r(t) at t = j / samples_per_unit, j = 0 .. M * samples_per_unit - 1. The
/// polyline is open; callers close it by joining the last sample to the first.
[[nodiscard]] std::vector<CurveSample> sample_curve(const CurveModel& model, int samples_per_unit);

/// (1/M) sum_m ||r(m) - p[m]||^2. Throws UsageError if the model period is not
/// the number of points.
[[nodiscard]] double qfe(const CurveModel& model, const ContourPoints& points);

/// Row n of L [c_x c_y] is a knot when its norm exceeds epsilon times the
/// largest row norm of the model (all blocks). Rows within round-off of zero
/// relative to the block's coefficient magnitude are never knots. A knot of
/// row n sits at t = (n - (alpha + 1) / 2) h mod M; for even alpha these are
/// half-step offsets. Entries are ordered by block, then location.
[[nodiscard]] KnotList extract_knots(const CurveModel& model, double epsilon = kDefaultKnotEps);

/// Adds i.i.d. N(0, sigma^2) noise to both coordinates, with sigma chosen so
/// that 10 log10(P_signal / P_noise) = snr_db. P_signal is the mean squared
/// norm of the centroid-centered points and P_noise = 2 sigma^2. An infinite
/// snr_db returns the input unchanged.
[[nodiscard]] ContourPoints add_noise(const ContourPoints& points, double snr_db,
                                      std::uint64_t seed);

/// Greedy knot-removal stand-in used as a sparsity reference. Starts from the
/// least-squares fit with N = M, then repeatedly zeroes the L-row of smallest
/// group l2 norm and re-fits the coefficients locally around it, until
/// target_k knots remain. Throws UsageError unless 0 <= target_k <= M.
[[nodiscard]] FitResult knot_removal_baseline(const ContourPoints& points, Degree alpha,
                                              int target_k,
                                              double knot_eps = kDefaultKnotEps);

}  // namespace sparsecurve
