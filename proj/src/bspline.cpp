#include "sparsecurve/bspline.hpp"

#include <cmath>
#include <string>

#include "sparsecurve/errors.hpp"

namespace sparsecurve {

Degree::Degree(int alpha) : alpha_(alpha) {
  if (alpha < 0 || alpha > kMax) {
    throw ConfigError("unsupported B-spline degree " + std::to_string(alpha) +
                      " (supported: 0..3)");
  }
}

double eval_bspline(Degree alpha, double t) noexcept {
  switch (alpha.value()) {
    case 0:
      return (t >= -0.5 && t < 0.5) ? 1.0 : 0.0;
    case 1: {
      const double a = std::abs(t);
      return a < 1.0 ? 1.0 - a : 0.0;
    }
    case 2: {
      const double a = std::abs(t);
      if (a < 0.5) return 0.75 - a * a;
      if (a < 1.5) {
        const double r = 1.5 - a;
        return 0.5 * r * r;
      }
      return 0.0;
    }
    case 3: {
      const double a = std::abs(t);
      if (a < 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
      if (a < 2.0) {
        const double r = 2.0 - a;
        return r * r * r / 6.0;
      }
      return 0.0;
    }
    default:
      return 0.0;  // unreachable: Degree is validated on construction
  }
}

SplineSpace::SplineSpace(Degree alpha, int period, int num_coeffs)
    : alpha_(alpha), period_(period), num_coeffs_(num_coeffs) {
  if (period < 1) {
    throw ConfigError("spline period must be positive, got " + std::to_string(period));
  }
  if (num_coeffs < alpha.order()) {
    throw ConfigError("degree " + std::to_string(alpha.value()) + " needs at least " +
                      std::to_string(alpha.order()) + " coefficients, got " +
                      std::to_string(num_coeffs));
  }
}

double eval_periodized_basis(const SplineSpace& space, int n, double t) {
  const double x = space.to_grid(t) - n;
  const double radius = support_radius(space.degree());
  const int big_n = space.num_coeffs();
  // One extra wrap on each side; eval_bspline decides the boundary ties.
  const auto k_lo = static_cast<long>(std::floor((x - radius) / big_n)) - 1;
  const auto k_hi = static_cast<long>(std::ceil((x + radius) / big_n)) + 1;
  double sum = 0.0;
  for (long k = k_lo; k <= k_hi; ++k) {
    sum += eval_bspline(space.degree(), x - static_cast<double>(big_n * k));
  }
  return sum;
}

double eval_spline(const SplineSpace& space, const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                   double t) {
  const double u = space.to_grid(t);
  const double radius = support_radius(space.degree());
  const long big_n = space.num_coeffs();
  const auto j_lo = static_cast<long>(std::ceil(u - radius)) - 1;
  const auto j_hi = static_cast<long>(std::floor(u + radius)) + 1;
  double sum = 0.0;
  for (long j = j_lo; j <= j_hi; ++j) {
    const double w = eval_bspline(space.degree(), u - static_cast<double>(j));
    if (w == 0.0) continue;
    const long n = ((j % big_n) + big_n) % big_n;
    sum += w * coeffs[n];
  }
  return sum;
}

FiniteDiffFilter finite_diff_filter(Degree alpha) {
  const int len = alpha.order() + 1;
  FiniteDiffFilter filter;
  filter.taps.assign(len, 0);
  int binom = 1;
  for (int k = 0; k < len; ++k) {
    filter.taps[k] = (k % 2 == 0) ? binom : -binom;
    binom = binom * (alpha.order() - k) / (k + 1);
  }
  return filter;
}

Eigen::VectorXd sampled_basis_sequence(const SplineSpace& space) {
  const int n = space.num_coeffs();
  Eigen::VectorXd b(n);
  for (int k = 0; k < n; ++k) {
    b[k] = eval_periodized_basis(space, 0, k * space.step());
  }
  return b;
}

}  // namespace sparsecurve
