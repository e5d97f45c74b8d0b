#pragma once

// Symmetric polynomial B-splines of degree 0..3, their M-periodized and
// h-dilated shifts, and the finite-difference filters that carry the
// derivative operator D^(alpha+1) onto the coefficient grid.

#include <compare>
#include <vector>

#include <Eigen/Core>

namespace sparsecurve {

/// Polynomial degree alpha of a B-spline; the matching operator is D^(alpha+1).
class Degree {
 public:
  static constexpr int kMax = 3;

  /// Throws ConfigError unless 0 <= alpha <= 3.
  explicit Degree(int alpha);

  [[nodiscard]] int value() const noexcept { return alpha_; }
  /// Order of the derivative operator, alpha + 1.
  [[nodiscard]] int order() const noexcept { return alpha_ + 1; }

  auto operator<=>(const Degree&) const = default;

 private:
  int alpha_;
};

/// beta^alpha(t) in closed form.
///
/// Degree 0 uses the half-open box [-1/2, 1/2): it is 1 at t = -1/2 and 0 at
/// t = +1/2, so integer shifts of the box sum to exactly one everywhere.
[[nodiscard]] double eval_bspline(Degree alpha, double t) noexcept;

/// Half-width of the support of beta^alpha, (alpha + 1) / 2.
[[nodiscard]] inline double support_radius(Degree alpha) noexcept {
  return 0.5 * alpha.order();
}

/// Uniform periodic spline space: degree, period M, coefficient count N.
/// The grid step h = M / N is derived, never stored.
class SplineSpace {
 public:
  /// Throws ConfigError unless M >= 1 and N >= alpha + 1, so that one basis
  /// support fits in a period. The regularization matrix needs N >= alpha + 2.
  SplineSpace(Degree alpha, int period, int num_coeffs);

  [[nodiscard]] Degree degree() const noexcept { return alpha_; }
  [[nodiscard]] int period() const noexcept { return period_; }
  [[nodiscard]] int num_coeffs() const noexcept { return num_coeffs_; }
  [[nodiscard]] double step() const noexcept {
    return static_cast<double>(period_) / num_coeffs_;
  }

  /// Parameter t expressed in grid units, t / h.
  [[nodiscard]] double to_grid(double t) const noexcept {
    return t * num_coeffs_ / period_;
  }

  bool operator==(const SplineSpace&) const = default;

 private:
  Degree alpha_;
  int period_;
  int num_coeffs_;
};

/// phi_M(t - n h) = sum_k beta^alpha((t - n h - M k) / h).
/// Only the periodic copies whose support reaches t are summed.
[[nodiscard]] double eval_periodized_basis(const SplineSpace& space, int n, double t);

/// sum_n c[n] phi_M(t - n h) for one coordinate. Visits only the (alpha + 1)
/// or (alpha + 2) grid shifts that overlap t, so the cost is independent of N.
[[nodiscard]] double eval_spline(const SplineSpace& space,
                                 const Eigen::Ref<const Eigen::VectorXd>& coeffs, double t);

/// FIR taps d_alpha[0..alpha+1] of the (alpha+1)-th finite difference.
struct FiniteDiffFilter {
  std::vector<int> taps;

  bool operator==(const FiniteDiffFilter&) const = default;
};

/// Binomial-sign filter (1, -1)^{*(alpha+1)}: (1,-1), (1,-2,1), (1,-3,3,-1),
/// (1,-4,6,-4,1).
[[nodiscard]] FiniteDiffFilter finite_diff_filter(Degree alpha);

/// b[k] = phi_M(k h), k = 0..N-1.
[[nodiscard]] Eigen::VectorXd sampled_basis_sequence(const SplineSpace& space);

}  // namespace sparsecurve
