#pragma once

// Synthetic contours and random inputs shared by the unit and acceptance tests.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "sparsecurve/bspline.hpp"
#include "sparsecurve/geometry.hpp"
#include "sparsecurve/operators.hpp"

namespace fixtures {

using sparsecurve::ContourPoints;
using sparsecurve::Point2;

/// Axis-aligned square, `per_side` samples per side, corners on samples
/// 0, per_side, 2 per_side, 3 per_side.
ContourPoints square(int per_side, double side);

/// Closed polygon through `vertices`; edge k gets samples[k] points starting
/// at vertex k, so every vertex lands on an integer parameter.
ContourPoints polygon(const std::vector<Point2>& vertices, const std::vector<int>& samples);

/// Irregular hexagon used for the rotation and noise experiments (M = 72).
ContourPoints reference_polygon();

/// Rectangle with circular corners sampled uniformly in arc length.
ContourPoints rounded_rectangle(int m, double width, double height, double radius);

/// Points sampled at the integers from the spline curve with the given
/// coefficients.
ContourPoints spline_contour(const sparsecurve::SplineSpace& space,
                             const sparsecurve::CoefficientPair& coeffs);

/// A smooth closed loop (perturbed circle) as coefficients in `space`.
sparsecurve::CoefficientPair loop_coefficients(const sparsecurve::SplineSpace& space,
                                               std::uint64_t seed);

sparsecurve::CoefficientPair random_pair(int n, std::uint64_t seed, double scale = 1.0);
ContourPoints random_points(int m, std::uint64_t seed, double scale = 1.0);

std::vector<Point2> to_vector(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace fixtures
